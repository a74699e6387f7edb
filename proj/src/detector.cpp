#include "hhg/detector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace hhg::sim {

namespace {

// splitmix64, used to derive independent per-chunk seeds.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::int64_t chunk_pulses = 1 << 16;

std::int64_t to_ps(double ns) { return std::llround(ns * 1e3); }

}  // namespace

void DetectorParams::validate() const {
    if (quantum_efficiency < 0 || quantum_efficiency > 1)
        throw ConfigError("quantum_efficiency must lie in [0, 1]");
    if (dark_rate_hz < 0) throw ConfigError("dark_rate_hz must be non-negative");
    if (dead_time_ns < 0) throw ConfigError("dead_time_ns must be non-negative");
    if (afterpulse_prob < 0 || afterpulse_prob >= 1)
        throw ConfigError("afterpulse_prob must lie in [0, 1)");
    if (afterpulse_delay_mean_ns <= 0) throw ConfigError("afterpulse_delay_mean_ns must be positive");
    if (diffusion_tail_prob < 0 || diffusion_tail_prob >= 1)
        throw ConfigError("diffusion_tail_prob must lie in [0, 1)");
    if (diffusion_tail_tau_ns <= 0) throw ConfigError("diffusion_tail_tau_ns must be positive");
    if (jitter_sigma_ps < 0) throw ConfigError("jitter_sigma_ps must be non-negative");
}

void RunConfig::validate() const {
    if (rep_rate_hz <= 0) throw ConfigError("rep_rate_hz must be positive");
    if (n_pulses < 0) throw ConfigError("n_pulses must be non-negative");
    if (attenuation_h3 < 0 || attenuation_h3 > 1 || attenuation_h5 < 0 || attenuation_h5 > 1)
        throw ConfigError("attenuation must lie in [0, 1]");
    det_h3.validate();
    det_h5.validate();
}

double TimeTagStream::duration_s() const {
    if (rep_rate_hz <= 0) return 0.0;
    return double(n_pulses) / rep_rate_hz;
}

// --- sources -------------------------------------------------------------------

JointPmfSource::JointPmfSource(Eigen::MatrixXd pmf) : pmf_(std::move(pmf)) {
    if (pmf_.size() == 0) throw ConfigError("joint pmf is empty");
    if ((pmf_.array() < 0).any()) throw ConfigError("joint pmf has negative entries");
    const double total = pmf_.sum();
    if (std::abs(total - 1.0) > 1e-10) throw ConfigError("joint pmf must sum to 1 within 1e-10");
    cdf_.reserve(pmf_.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < pmf_.size(); ++i) {
        acc += pmf_(i);  // column-major flattening
        cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
}

JointPmfSource JointPmfSource::from_state(const fock::TwoModeState& state) {
    state.require_normalized();
    Eigen::MatrixXd pmf = state.grid().cwiseAbs2();
    pmf /= pmf.sum();
    return JointPmfSource(std::move(pmf));
}

std::pair<int, int> JointPmfSource::sample(std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    const auto flat = static_cast<Eigen::Index>(it - cdf_.begin());
    const auto rows = pmf_.rows();
    return {int(flat % rows), int(flat / rows)};
}

std::pair<int, int> sample_pulse_photons(const SourceModel& source, std::mt19937_64& rng) {
    struct Visitor {
        std::mt19937_64& rng;
        std::pair<int, int> operator()(const CoherentSource& s) {
            const int n3 = s.mu3 > 0 ? std::poisson_distribution<int>(s.mu3)(rng) : 0;
            const int n5 = s.mu5 > 0 ? std::poisson_distribution<int>(s.mu5)(rng) : 0;
            return {n3, n5};
        }
        std::pair<int, int> operator()(const ThermalSource& s) {
            // Bose-Einstein pmf (1-p)^n p with p = 1/(1+mu).
            auto draw = [&](double mu) {
                if (mu <= 0) return 0;
                return std::geometric_distribution<int>(1.0 / (1.0 + mu))(rng);
            };
            return {draw(s.mu3), draw(s.mu5)};
        }
        std::pair<int, int> operator()(const TmsvSource& s) {
            if (s.nbar <= 0) return {0, 0};
            const int n = std::geometric_distribution<int>(1.0 / (1.0 + s.nbar))(rng);
            return {n, n};
        }
        std::pair<int, int> operator()(const JointPmfSource& s) { return s.sample(rng); }
    };
    return std::visit(Visitor{rng}, source);
}

std::pair<int, int> beamsplit(int n, std::mt19937_64& rng) {
    if (n < 0) throw ConfigError("photon count must be non-negative");
    if (n == 0) return {0, 0};
    const int a = std::binomial_distribution<int>(n, 0.5)(rng);
    return {a, n - a};
}

// --- detection channel ----------------------------------------------------------

namespace {

// Dead-time filter and afterpulse machinery for one channel. State survives
// across chunks so suppression works across chunk boundaries.
class DetectorChannel {
  public:
    DetectorChannel(std::uint8_t channel, const DetectorParams& params)
        : channel_(channel), params_(params), dead_ps_(to_ps(params.dead_time_ns)) {}

    // Candidate photon/dark arrival (pre dead-time). Times may come unsorted
    // within a chunk; callers collect then process_chunk().
    void add_candidate(std::uint64_t t_ps) { candidates_.push_back(t_ps); }

    // Photon absorption for one pulse: eta thinning, jitter, diffusion tail.
    void absorb(int n_photons, std::uint64_t pulse_time_ps, std::mt19937_64& rng) {
        for (int i = 0; i < n_photons; ++i) {
            if (params_.quantum_efficiency < 1.0 &&
                std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= params_.quantum_efficiency)
                continue;
            double dt_ps = 0.0;
            if (params_.jitter_sigma_ps > 0)
                dt_ps += std::normal_distribution<double>(0.0, params_.jitter_sigma_ps)(rng);
            if (params_.diffusion_tail_prob > 0 &&
                std::uniform_real_distribution<double>(0.0, 1.0)(rng) < params_.diffusion_tail_prob)
                dt_ps += std::exponential_distribution<double>(1.0 / (params_.diffusion_tail_tau_ns * 1e3))(rng);
            const auto shift = std::llround(dt_ps);
            const auto t = (shift < 0 && std::uint64_t(-shift) > pulse_time_ps)
                               ? std::uint64_t{0}
                               : pulse_time_ps + shift;
            add_candidate(t);
        }
    }

    // Dark counts as a Poisson process over [t0, t1).
    void add_dark(std::uint64_t t0_ps, std::uint64_t t1_ps, std::mt19937_64& rng) {
        if (params_.dark_rate_hz <= 0) return;
        std::exponential_distribution<double> gap(params_.dark_rate_hz * 1e-12);  // per ps
        double t = double(t0_ps);
        for (;;) {
            t += gap(rng);
            if (t >= double(t1_ps)) break;
            add_candidate(std::uint64_t(t));
        }
    }

    // Registers everything with time < horizon; afterpulses beyond the horizon
    // stay pending for the next chunk.
    void process_until(std::uint64_t horizon_ps, std::mt19937_64& rng,
                       std::vector<TimeTagRecord>& out) {
        std::stable_sort(candidates_.begin(), candidates_.end());
        std::size_t i = 0;
        for (;;) {
            const bool have_cand = i < candidates_.size();
            const bool have_ap = !pending_.empty() && pending_.top() < horizon_ps;
            if (!have_cand && !have_ap) break;
            std::uint64_t t;
            if (have_cand && (!have_ap || candidates_[i] <= pending_.top())) {
                t = candidates_[i++];
            } else {
                t = pending_.top();
                pending_.pop();
            }
            register_click(t, rng, out);
        }
        candidates_.clear();
    }

  private:
    void register_click(std::uint64_t t, std::mt19937_64& rng, std::vector<TimeTagRecord>& out) {
        if (has_last_ && std::int64_t(t) - std::int64_t(last_) < dead_ps_) return;
        last_ = t;
        has_last_ = true;
        out.push_back({channel_, t});
        if (params_.afterpulse_prob > 0 &&
            std::uniform_real_distribution<double>(0.0, 1.0)(rng) < params_.afterpulse_prob) {
            const double d =
                std::exponential_distribution<double>(1.0 / (params_.afterpulse_delay_mean_ns * 1e3))(rng);
            pending_.push(t + std::uint64_t(std::llround(d)));
        }
    }

    std::uint8_t channel_;
    DetectorParams params_;
    std::int64_t dead_ps_;
    std::vector<std::uint64_t> candidates_;
    std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> pending_;
    std::uint64_t last_ = 0;
    bool has_last_ = false;
};

}  // namespace

std::vector<TimeTagRecord> detect(int n_photons, std::uint64_t pulse_time_ps,
                                  const DetectorParams& params, std::mt19937_64& rng,
                                  std::uint64_t window_ps, std::uint8_t channel) {
    params.validate();
    if (n_photons < 0) throw ConfigError("photon count must be non-negative");
    DetectorChannel ch(channel, params);
    ch.absorb(n_photons, pulse_time_ps, rng);
    ch.add_dark(pulse_time_ps, pulse_time_ps + window_ps, rng);
    std::vector<TimeTagRecord> out;
    ch.process_until(pulse_time_ps + window_ps, rng, out);
    return out;
}

TimeTagStream simulate_run(const RunConfig& config) {
    config.validate();
    const double period_ps = 1e12 / config.rep_rate_hz;
    const int n_ch = config.n_channels();

    std::vector<DetectorChannel> channels;
    channels.reserve(n_ch);
    channels.emplace_back(std::uint8_t{0},
                          config.topology == Topology::double_beam || config.single_beam_mode == fock::Mode::h3
                              ? config.det_h3
                              : config.det_h5);
    channels.emplace_back(std::uint8_t{1},
                          config.topology == Topology::double_beam || config.single_beam_mode == fock::Mode::h3
                              ? config.det_h3
                              : config.det_h5);
    if (config.topology == Topology::double_beam) {
        channels.emplace_back(std::uint8_t{2}, config.det_h5);
        channels.emplace_back(std::uint8_t{3}, config.det_h5);
    }

    std::vector<TimeTagRecord> all;
    std::vector<TimeTagRecord> chunk_tags;

    const std::int64_t n_chunks = (config.n_pulses + chunk_pulses - 1) / chunk_pulses;
    for (std::int64_t chunk = 0; chunk < n_chunks; ++chunk) {
        std::mt19937_64 rng(splitmix64(config.rng_seed ^ splitmix64(std::uint64_t(chunk) + 1)));
        const std::int64_t p0 = chunk * chunk_pulses;
        const std::int64_t p1 = std::min(config.n_pulses, p0 + chunk_pulses);

        for (std::int64_t p = p0; p < p1; ++p) {
            // pulse slots start one period in, keeping jittered times positive
            const auto t_pulse = std::uint64_t(std::llround(double(p + 1) * period_ps));
            auto [n3, n5] = sample_pulse_photons(config.source, rng);

            if (config.topology == Topology::single_beam_hbt) {
                int n = (config.single_beam_mode == fock::Mode::h3) ? n3 : n5;
                const double att = (config.single_beam_mode == fock::Mode::h3) ? config.attenuation_h3
                                                                               : config.attenuation_h5;
                if (n > 0 && att < 1.0) n = std::binomial_distribution<int>(n, att)(rng);
                if (n > 0) {
                    auto [a, b] = beamsplit(n, rng);
                    channels[0].absorb(a, t_pulse, rng);
                    channels[1].absorb(b, t_pulse, rng);
                }
            } else {
                if (n3 > 0 && config.attenuation_h3 < 1.0)
                    n3 = std::binomial_distribution<int>(n3, config.attenuation_h3)(rng);
                if (n5 > 0 && config.attenuation_h5 < 1.0)
                    n5 = std::binomial_distribution<int>(n5, config.attenuation_h5)(rng);
                if (n3 > 0) {
                    auto [a, b] = beamsplit(n3, rng);
                    channels[0].absorb(a, t_pulse, rng);
                    channels[1].absorb(b, t_pulse, rng);
                }
                if (n5 > 0) {
                    auto [a, b] = beamsplit(n5, rng);
                    channels[2].absorb(a, t_pulse, rng);
                    channels[3].absorb(b, t_pulse, rng);
                }
            }
        }

        // Half-period chunk boundaries: non-overlapping dark intervals, and
        // every pulse slot sits strictly inside its chunk window.
        const auto chunk_start = std::uint64_t(std::llround((double(p0) + 0.5) * period_ps));
        const auto chunk_end = std::uint64_t(std::llround((double(p1) + 0.5) * period_ps));
        for (auto& ch : channels) {
            ch.add_dark(chunk_start, chunk_end, rng);
            ch.process_until(chunk_end, rng, chunk_tags);
        }
        all.insert(all.end(), chunk_tags.begin(), chunk_tags.end());
        chunk_tags.clear();
    }

    std::stable_sort(all.begin(), all.end(), [](const TimeTagRecord& a, const TimeTagRecord& b) {
        return a.timestamp_ps != b.timestamp_ps ? a.timestamp_ps < b.timestamp_ps
                                                : a.channel < b.channel;
    });

    TimeTagStream stream;
    stream.records = std::move(all);
    stream.rep_rate_hz = config.rep_rate_hz;
    stream.n_channels = std::uint16_t(n_ch);
    stream.seed = config.rng_seed;
    stream.n_pulses = config.n_pulses;
    return stream;
}

}  // namespace hhg::sim
