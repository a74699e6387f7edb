#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hhg/fock.hpp"

// Time-dependent intraband interaction Hamiltonian for the bipartite (H3, H5)
// harmonic system and its propagation.
//
// Working in the interaction picture, the generator at time t is
//
//   H(t) = n_e E_g { 1 - cos(th) + sin(th) [ c3 X3(t) + c5 X5(t) ]
//                    + (1/2) cos(th) [ c3^2 X3(t)^2 + c5^2 X5(t)^2
//                                      + 2 c3 c5 X3(t) X5(t) ] },
//
// with th = pi * A_L(t) / K_c, X_j(t) = a_j e^{-i w_j t} + a_j^+ e^{+i w_j t},
// and A_L(t) the dimensionless classical drive. Quadratic blocks expand into
// pair creation (squeezing), number shifts, mode mixing, and scalar terms.
// The scalar terms only rotate the global phase and are dropped by default.
//
// Internal units: energies in eV, times in fs, frequencies in rad/fs.

namespace hhg {

struct HamiltonianParams {
    double n_e = 1.0;      // effective electron number (overall strength)
    double e_g_ev = 1.0;   // conduction-band half-width
    double k_c = 1.0;      // inverse lattice constant, normalized units
    double omega3 = 3.0;   // rad/fs
    double omega5 = 5.0;   // rad/fs
    double c3 = 0.1;       // coupling c_j = (pi / K_c) sqrt(pi e^2 / (w_j V)), e = 1
    double c5 = 0.1 * 0.7745966692414834;  // c3 * sqrt(3/5)

    // Derives the couplings from a quantization volume (normalized units).
    static HamiltonianParams from_volume(double n_e, double e_g_ev, double k_c, double omega_l,
                                         double volume);

    // Checks omega5/omega3 = 5/3 and c3/c5 = sqrt(omega5/omega3).
    void validate() const;
};

enum class PulseEnvelope { gaussian, flat };

struct PulseSpec {
    PulseEnvelope envelope = PulseEnvelope::gaussian;
    double peak_atilde = 0.0;   // peak of the dimensionless drive potential
    double omega_carrier = 0.8969;  // rad/fs (2100 nm)
    double duration_fwhm_fs = 80.0; // FWHM of the field envelope
    double phase = 0.0;
    double center_fs = 0.0;

    // Dimensionless drive A_L(t).
    double atilde(double t_fs) const;
    void validate() const;
};

// Term toggles. The defaults keep the physical couplings and drop the scalar
// vacuum-energy shift (a pure global phase under exponentiation).
struct GeneratorTerms {
    bool scalar_shift = false;
    bool linear = true;
    bool quad_single = true;
    bool quad_cross = true;
    // Restrict the cross block to the pair terms a3 a5 + a3+ a5+ (a pure
    // two-mode squeezer), dropping the beam-mixing a3 a5+ + a3+ a5 part.
    bool cross_pair_only = false;
};

// Abstract time-dependent generator: y = H(t) x on the flattened two-mode
// basis (column-major over the amplitude grid).
class Generator {
  public:
    virtual ~Generator() = default;
    virtual int rows3() const = 0;  // cutoff3 + 1
    virtual int cols5() const = 0;  // cutoff5 + 1
    int dim() const { return rows3() * cols5(); }
    virtual void apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const = 0;
    // Upper bound on the operator norm at time t (eV); used by step control.
    virtual double norm_bound(double t) const = 0;
    // Dense matrix at time t (assembled column by column unless overridden).
    virtual Eigen::MatrixXcd matrix(double t) const;
};

// The interaction Hamiltonian above, applied matrix-free through its ladder
// monomials.
class InteractionGenerator : public Generator {
  public:
    InteractionGenerator(HamiltonianParams params, PulseSpec pulse, int cutoff3, int cutoff5,
                         GeneratorTerms terms = {});

    int rows3() const override { return rows_; }
    int cols5() const override { return cols_; }
    void apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;
    double norm_bound(double t) const override;

    const HamiltonianParams& params() const { return params_; }
    const PulseSpec& pulse() const { return pulse_; }

  private:
    HamiltonianParams params_;
    PulseSpec pulse_;
    GeneratorTerms terms_;
    int rows_, cols_;
};

// Wraps an explicit matrix-valued function of time (test harnesses, custom
// generators, piecewise-constant staircases).
class MatrixGenerator : public Generator {
  public:
    MatrixGenerator(std::function<Eigen::MatrixXcd(double)> fn, int rows3, int cols5);
    int rows3() const override { return rows_; }
    int cols5() const override { return cols_; }
    void apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;
    double norm_bound(double t) const override;
    Eigen::MatrixXcd matrix(double t) const override;

  private:
    std::function<Eigen::MatrixXcd(double)> fn_;
    int rows_, cols_;
};

// Dense generator matrix at time t. Verifies Hermiticity (relative deviation
// below 1e-12) and throws NonHermitian otherwise.
Eigen::MatrixXcd build_generator(const HamiltonianParams& params, const PulseSpec& pulse, double t,
                                 int cutoff3, int cutoff5, const GeneratorTerms& terms = {});

enum class Integrator {
    magnus_cf4,   // 4th-order commutator-free Magnus, matrix-free fast path
    expm_direct,  // per-step dense exponential of the midpoint generator
};

struct StepControl {
    Integrator method = Integrator::magnus_cf4;
    double dt_max_fs = 0.0;        // 0: integrate grid intervals in one step each
    double stability_limit = 0.1;  // required: ||H|| dt / hbar below this per step
    double expmv_tol = 1e-14;
    double truncation_tol = 1e-8;  // allowed top-two-level mass during evolution
    int error_stride = 16;         // local-error estimate cadence (0 disables)
    bool record_trajectory = false;
};

struct EvolutionResult {
    fock::TwoModeState final_state;
    std::vector<std::pair<double, fock::TwoModeState>> trajectory;
    long steps = 0;
    double max_local_error = 0.0;  // step-halving estimate, max over sampled steps
    double norm_drift = 0.0;       // | ||psi|| - 1 | before final normalization
};

// Propagates the state through the node times in t_grid (strictly increasing,
// at least two entries), subdividing each interval per StepControl.
EvolutionResult evolve(const fock::TwoModeState& initial, const Generator& gen,
                       const std::vector<double>& t_grid, const StepControl& ctrl = {});

// Convenience overload building an InteractionGenerator at the state's cutoffs.
EvolutionResult evolve(const fock::TwoModeState& initial, const HamiltonianParams& params,
                       const PulseSpec& pulse, const std::vector<double>& t_grid,
                       const StepControl& ctrl = {}, const GeneratorTerms& terms = {});

// Uniform grid helper, n_nodes >= 2.
std::vector<double> uniform_grid(double t0, double t1, int n_nodes);

// Cauchy-Schwarz ratio R = g35^2 / (g33 g55); R > 1 flags non-classical
// cross-correlation. Throws NonPositiveInput unless all inputs are positive.
double r_parameter(double g2_33, double g2_55, double g2_35);

// --- intensity scan -----------------------------------------------------------

struct ScanConfig {
    HamiltonianParams params;  // reference values at intensity_ref
    PulseSpec pulse;           // pulse.peak_atilde is the value at intensity_ref
    double intensity_ref = 1.0;
    double n_e_exponent = 0.0;  // n_e(I) = n_e_ref (I / I_ref)^exponent
    GeneratorTerms terms{};
    StepControl step{};
    std::vector<double> t_grid;
    int cutoff3 = 16;
    int cutoff5 = 16;
    double vacuum_threshold = 1e-9;  // mean photons below this flags ZeroIntensity
};

struct ScanPoint {
    double intensity = 0.0;
    bool ok = false;
    std::string status;  // "ok" or the error name
    double g2_33 = 0.0, g2_55 = 0.0, g2_35 = 0.0, r = 0.0;  // valid only when ok
};

// One record per grid intensity; failed points are flagged and the scan
// continues. The drive amplitude scales as sqrt(I / I_ref).
std::vector<ScanPoint> scan_intensity(const ScanConfig& config,
                                      const std::vector<double>& intensities,
                                      const fock::TwoModeState* initial = nullptr);

}  // namespace hhg
