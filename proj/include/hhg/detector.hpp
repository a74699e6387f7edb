#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "hhg/errors.hpp"
#include "hhg/fock.hpp"

// Monte-Carlo generation of SPAD time-tag streams from a pulsed two-mode
// photon source: 50/50 splitting, quantum efficiency, dark counts, dead time,
// afterpulsing, diffusion-tail delay and timing jitter.
//
// Pulses are simulated in chunks with per-chunk derived seeds; dead-time and
// afterpulse state is carried across chunk boundaries, so a run is fully
// deterministic for a given RunConfig.

namespace hhg::sim {

struct DetectorParams {
    double quantum_efficiency = 0.6;  // in [0, 1]
    double dark_rate_hz = 0.0;
    double dead_time_ns = 25.0;
    double afterpulse_prob = 0.01;           // in [0, 1)
    double afterpulse_delay_mean_ns = 10.0;  // exponential delay
    double diffusion_tail_prob = 0.1;        // in [0, 1)
    double diffusion_tail_tau_ns = 2.0;      // exponential tail constant
    double jitter_sigma_ps = 150.0;          // Gaussian timing jitter

    void validate() const;  // throws ConfigError on out-of-range values
};

// --- per-pulse photon sources -------------------------------------------------

struct CoherentSource {
    double mu3 = 0.0, mu5 = 0.0;  // independent Poisson means per pulse
};

struct ThermalSource {
    double mu3 = 0.0, mu5 = 0.0;  // independent Bose-Einstein means per pulse
};

struct TmsvSource {
    double nbar = 0.0;  // geometric pair number; always n3 == n5
};

// Explicit joint probability table over (n3, n5).
class JointPmfSource {
  public:
    explicit JointPmfSource(Eigen::MatrixXd pmf);  // must sum to 1 within 1e-10
    static JointPmfSource from_state(const fock::TwoModeState& state);
    const Eigen::MatrixXd& pmf() const { return pmf_; }
    std::pair<int, int> sample(std::mt19937_64& rng) const;

  private:
    Eigen::MatrixXd pmf_;
    std::vector<double> cdf_;
};

using SourceModel = std::variant<CoherentSource, ThermalSource, TmsvSource, JointPmfSource>;

// One (n3, n5) draw from the declared per-pulse joint distribution.
std::pair<int, int> sample_pulse_photons(const SourceModel& source, std::mt19937_64& rng);

// 50/50 beamsplitter: n_a ~ Binomial(n, 1/2), returns (n_a, n - n_a).
std::pair<int, int> beamsplit(int n, std::mt19937_64& rng);

// --- time tags ----------------------------------------------------------------

struct TimeTagRecord {
    std::uint8_t channel = 0;
    std::uint64_t timestamp_ps = 0;
};

inline bool operator==(const TimeTagRecord& a, const TimeTagRecord& b) {
    return a.channel == b.channel && a.timestamp_ps == b.timestamp_ps;
}

struct TimeTagStream {
    std::vector<TimeTagRecord> records;  // sorted by (timestamp, channel)
    double rep_rate_hz = 18.66e6;
    std::uint16_t n_channels = 2;
    std::uint64_t seed = 0;

    double duration_s() const;  // span from 0 to the last pulse slot
    std::int64_t n_pulses = 0;
};

enum class Topology { single_beam_hbt, double_beam };

struct RunConfig {
    double rep_rate_hz = 18.66e6;
    std::int64_t n_pulses = 0;
    std::uint64_t rng_seed = 1;
    Topology topology = Topology::single_beam_hbt;
    fock::Mode single_beam_mode = fock::Mode::h3;  // harmonic measured in single-beam runs
    SourceModel source = CoherentSource{};
    DetectorParams det_h3{};  // channels 0 and 1
    DetectorParams det_h5{};  // channels 2 and 3 (double-beam only)
    double attenuation_h3 = 1.0;  // extra Bernoulli survival ahead of each arm
    double attenuation_h5 = 1.0;

    int n_channels() const { return topology == Topology::double_beam ? 4 : 2; }
    void validate() const;
};

// Detection of one pulse on a fresh channel: eta-thinning, jitter and
// diffusion-tail delays, dead-time suppression, afterpulses, and dark counts
// over [pulse_time, pulse_time + window).
std::vector<TimeTagRecord> detect(int n_photons, std::uint64_t pulse_time_ps,
                                  const DetectorParams& params, std::mt19937_64& rng,
                                  std::uint64_t window_ps = 53591, std::uint8_t channel = 0);

// Full run: merged, sorted stream over all channels, deterministic per seed.
TimeTagStream simulate_run(const RunConfig& config);

}  // namespace hhg::sim
