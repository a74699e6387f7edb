#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hhg/errors.hpp"

// Strong-field regime classifiers and power-law scaling analysis.

namespace hhg::strongfield {

struct MaterialParams {
    std::string name;
    double m_star = 0.0;    // reduced electron mass, units of m_e
    double e_gap_ev = 0.0;  // bandgap
    std::optional<double> lattice_const_nm;
    std::optional<double> refractive_index;  // used only by the in-medium field convention

    void validate() const;
};

struct LaserParams {
    double wavelength_nm = 2100.0;
    double peak_intensity_tw_cm2 = 0.0;
    double waist_um = 5.0;
    double duration_fwhm_fs = 80.0;
    double rep_rate_mhz = 18.66;
    std::optional<double> avg_power_mw;

    double omega_rad_s() const;       // angular frequency 2 pi c / lambda
    double photon_energy_ev() const;  // h c / lambda

    void validate() const;
};

// Field-from-intensity convention. The vacuum relation E = sqrt(2 I / (eps0 c))
// is the default; `medium` divides by the refractive index inside the sqrt.
enum class FieldConvention { vacuum, medium };

// Peak electric field in V/m from the peak intensity.
double peak_field_v_m(const LaserParams& laser, FieldConvention conv = FieldConvention::vacuum,
                      double refractive_index = 1.0);

// Keldysh parameter gamma_K = omega_L sqrt(m* E_gap) / (e E).
// gamma_K < 1 flags the tunneling / non-perturbative regime.
double keldysh(const MaterialParams& material, const LaserParams& laser,
               FieldConvention conv = FieldConvention::vacuum);

// Ponderomotive energy U_p = e^2 E^2 / (4 m omega^2) in eV, with m = m_star * m_e.
double ponderomotive_ev(const LaserParams& laser, double m_star,
                        FieldConvention conv = FieldConvention::vacuum,
                        double refractive_index = 1.0);

struct DipoleCheck {
    double z = 0.0;  // U_p / (hbar omega_IR), dimensionless
    bool ok = false; // z / (2 c) << 1 with c in atomic units; threshold 1e-2
};
DipoleCheck dipole_check(double u_p_ev, double photon_energy_ev);

struct RelativisticCheck {
    double z_f = 0.0;  // 2 U_p / (m_e c^2)
    bool ok = false;   // z_f << 1; threshold 1e-2
};
RelativisticCheck relativistic_check(double u_p_ev);

// Bloch parameter beta = omega_B / omega_L with omega_B = e E a / hbar.
// Throws MissingLatticeConstant when the material carries no lattice constant.
double bloch_parameter(const MaterialParams& material, const LaserParams& laser,
                       FieldConvention conv = FieldConvention::vacuum);

struct RegimeReport {
    double gamma_k = 0.0;
    double u_p_ev = 0.0;
    double z = 0.0;
    double z_f = 0.0;
    std::optional<double> beta_bloch;
    bool dipole_ok = false;
    bool nonrelativistic_ok = false;
    bool tunneling = false;  // gamma_k < 1
};

RegimeReport classify_regime(const MaterialParams& material, const LaserParams& laser,
                             FieldConvention conv = FieldConvention::vacuum);

// Built-in material table. Only GaAs ships with values; other materials must
// be fully user-supplied.
std::optional<MaterialParams> find_material(const std::string& name);

// Peak intensity (TW/cm^2) from average power via
// I = 2 P / (pi w^2 f_rep tau_eff), Gaussian tau_eff = fwhm * sqrt(pi / (4 ln 2)).
double peak_intensity_from_avg_power(double avg_power_mw, double waist_um, double rep_rate_mhz,
                                     double duration_fwhm_fs);

// --- scaling-law analysis ----------------------------------------------------

struct PowerLawFit {
    double exponent = 0.0;
    double exponent_se = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
};

// Least-squares fit of log(yield) against log(intensity).
// Throws NonPositiveData for non-positive samples, DegenerateFit for fewer
// than 3 points or zero spread.
PowerLawFit power_law_fit(std::span<const double> intensities, std::span<const double> yields);

struct Crossover {
    double intensity = 0.0;      // intersection of the two power laws
    PowerLawFit low;             // exponent pinned to the perturbative order
    PowerLawFit high;            // free fit on the upper segment
    int split_index = 0;         // first point of the upper segment
};

// Splits the data into a low-intensity segment following I^order and a free
// power law above, choosing the change point that minimizes total squared
// log-residuals, and returns the intersection of the two laws.
// Throws NoCrossover if the laws do not intersect inside the data range.
Crossover crossover_detect(std::span<const double> intensities, std::span<const double> yields,
                           int perturbative_order);

}  // namespace hhg::strongfield
