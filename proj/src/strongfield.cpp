#include "hhg/strongfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hhg/constants.hpp"

namespace hhg::strongfield {

namespace k = hhg::constants;

void MaterialParams::validate() const {
    if (m_star <= 0 || e_gap_ev <= 0) throw NonPositiveInput("material requires m_star > 0 and e_gap_ev > 0");
    if (lattice_const_nm && *lattice_const_nm <= 0) throw NonPositiveInput("lattice constant must be positive");
}

double LaserParams::omega_rad_s() const {
    return 2.0 * k::pi * k::c_m_per_s / (wavelength_nm * 1e-9);
}

double LaserParams::photon_energy_ev() const { return k::hc_ev_nm / wavelength_nm; }

void LaserParams::validate() const {
    if (wavelength_nm <= 0 || peak_intensity_tw_cm2 <= 0 || waist_um <= 0 || duration_fwhm_fs <= 0 ||
        rep_rate_mhz <= 0)
        throw NonPositiveInput("laser parameters must all be positive");
}

double peak_field_v_m(const LaserParams& laser, FieldConvention conv, double refractive_index) {
    laser.validate();
    const double i_w_m2 = laser.peak_intensity_tw_cm2 * 1e16;  // TW/cm^2 -> W/m^2
    double denom = k::eps0_f_per_m * k::c_m_per_s;
    if (conv == FieldConvention::medium) {
        if (refractive_index <= 0) throw NonPositiveInput("refractive index must be positive");
        denom *= refractive_index;
    }
    return std::sqrt(2.0 * i_w_m2 / denom);
}

double keldysh(const MaterialParams& material, const LaserParams& laser, FieldConvention conv) {
    material.validate();
    const double n = material.refractive_index.value_or(1.0);
    const double field = peak_field_v_m(laser, conv, n);
    const double m_kg = material.m_star * k::m_e_kg;
    const double gap_j = material.e_gap_ev * k::e_coulomb;
    return laser.omega_rad_s() * std::sqrt(m_kg * gap_j) / (k::e_coulomb * field);
}

double ponderomotive_ev(const LaserParams& laser, double m_star, FieldConvention conv,
                        double refractive_index) {
    if (m_star <= 0) throw NonPositiveInput("m_star must be positive");
    const double field = peak_field_v_m(laser, conv, refractive_index);
    const double omega = laser.omega_rad_s();
    const double up_j = std::pow(k::e_coulomb * field, 2) / (4.0 * m_star * k::m_e_kg * omega * omega);
    return up_j / k::e_coulomb;
}

DipoleCheck dipole_check(double u_p_ev, double photon_energy_ev) {
    if (u_p_ev < 0 || photon_energy_ev <= 0) throw NonPositiveInput("dipole_check requires U_p >= 0 and photon energy > 0");
    DipoleCheck out;
    out.z = u_p_ev / photon_energy_ev;
    out.ok = out.z / (2.0 * k::c_atomic_units) < 1e-2;
    return out;
}

RelativisticCheck relativistic_check(double u_p_ev) {
    if (u_p_ev < 0) throw NonPositiveInput("U_p must be non-negative");
    RelativisticCheck out;
    out.z_f = 2.0 * u_p_ev / k::m_e_c2_ev;
    out.ok = out.z_f < 1e-2;
    return out;
}

double bloch_parameter(const MaterialParams& material, const LaserParams& laser, FieldConvention conv) {
    material.validate();
    if (!material.lattice_const_nm) throw MissingLatticeConstant("material " + material.name + " has no lattice constant");
    const double n = material.refractive_index.value_or(1.0);
    const double field = peak_field_v_m(laser, conv, n);
    const double omega_bloch = k::e_coulomb * field * (*material.lattice_const_nm * 1e-9) / k::hbar_j_s;
    return omega_bloch / laser.omega_rad_s();
}

RegimeReport classify_regime(const MaterialParams& material, const LaserParams& laser, FieldConvention conv) {
    RegimeReport rep;
    rep.gamma_k = keldysh(material, laser, conv);
    rep.u_p_ev = ponderomotive_ev(laser, material.m_star, conv, material.refractive_index.value_or(1.0));
    const auto dip = dipole_check(rep.u_p_ev, laser.photon_energy_ev());
    rep.z = dip.z;
    rep.dipole_ok = dip.ok;
    const auto rel = relativistic_check(rep.u_p_ev);
    rep.z_f = rel.z_f;
    rep.nonrelativistic_ok = rel.ok;
    if (material.lattice_const_nm) rep.beta_bloch = bloch_parameter(material, laser, conv);
    rep.tunneling = rep.gamma_k < 1.0;
    return rep;
}

std::optional<MaterialParams> find_material(const std::string& name) {
    if (name == "GaAs" || name == "gaas")
        return MaterialParams{"GaAs", 0.067, 1.424, 0.565, std::nullopt};
    return std::nullopt;
}

double peak_intensity_from_avg_power(double avg_power_mw, double waist_um, double rep_rate_mhz,
                                     double duration_fwhm_fs) {
    if (avg_power_mw <= 0 || waist_um <= 0 || rep_rate_mhz <= 0 || duration_fwhm_fs <= 0)
        throw NonPositiveInput("all pulse-energy inputs must be positive");
    const double tau_eff_s = duration_fwhm_fs * 1e-15 * std::sqrt(k::pi / (4.0 * std::log(2.0)));
    const double w_cm = waist_um * 1e-4;
    const double i_w_cm2 =
        2.0 * (avg_power_mw * 1e-3) / (k::pi * w_cm * w_cm * rep_rate_mhz * 1e6 * tau_eff_s);
    return i_w_cm2 * 1e-12;  // W/cm^2 -> TW/cm^2
}

namespace {

struct LogData {
    std::vector<double> x, y;
};

LogData to_logs(std::span<const double> intensities, std::span<const double> yields) {
    if (intensities.size() != yields.size()) throw DegenerateFit("intensity and yield arrays differ in length");
    LogData d;
    d.x.reserve(intensities.size());
    d.y.reserve(yields.size());
    for (size_t i = 0; i < intensities.size(); ++i) {
        if (intensities[i] <= 0 || yields[i] <= 0) throw NonPositiveData("power-law fits need strictly positive data");
        d.x.push_back(std::log(intensities[i]));
        d.y.push_back(std::log(yields[i]));
    }
    return d;
}

// OLS slope/intercept over [begin, end).
struct LineFit {
    double slope, intercept, ssr, slope_se, r2;
};

LineFit fit_line(const LogData& d, size_t begin, size_t end) {
    const size_t n = end - begin;
    double sx = 0, sy = 0;
    for (size_t i = begin; i < end; ++i) {
        sx += d.x[i];
        sy += d.y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = begin; i < end; ++i) {
        const double dx = d.x[i] - mx, dy = d.y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) throw DegenerateFit("intensities have no spread on the log axis");
    LineFit f{};
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.ssr = std::max(0.0, syy - f.slope * sxy);
    f.slope_se = (n > 2) ? std::sqrt(f.ssr / double(n - 2) / sxx) : 0.0;
    f.r2 = (syy > 0) ? 1.0 - f.ssr / syy : 1.0;
    return f;
}

// Fixed-slope fit: only the intercept is free.
double fit_intercept(const LogData& d, size_t begin, size_t end, double slope, double* ssr) {
    const size_t n = end - begin;
    double s = 0;
    for (size_t i = begin; i < end; ++i) s += d.y[i] - slope * d.x[i];
    const double intercept = s / n;
    if (ssr) {
        double acc = 0;
        for (size_t i = begin; i < end; ++i) {
            const double r = d.y[i] - slope * d.x[i] - intercept;
            acc += r * r;
        }
        *ssr = acc;
    }
    return intercept;
}

}  // namespace

PowerLawFit power_law_fit(std::span<const double> intensities, std::span<const double> yields) {
    if (intensities.size() < 3) throw DegenerateFit("power-law fit needs at least 3 points");
    const LogData d = to_logs(intensities, yields);
    const LineFit f = fit_line(d, 0, d.x.size());
    return PowerLawFit{f.slope, f.slope_se, std::exp(f.intercept), f.r2};
}

Crossover crossover_detect(std::span<const double> intensities, std::span<const double> yields,
                           int perturbative_order) {
    if (perturbative_order < 1) throw NonPositiveInput("perturbative order must be >= 1");
    const size_t n = intensities.size();
    if (n < 5) throw DegenerateFit("crossover detection needs at least 5 points");
    LogData d = to_logs(intensities, yields);
    if (!std::is_sorted(d.x.begin(), d.x.end())) throw DegenerateFit("intensities must be in ascending order");

    const double q = double(perturbative_order);
    double best_cost = std::numeric_limits<double>::infinity();
    size_t best_split = 0;
    // Low segment [0, s): slope pinned to q. High segment [s, n): free line.
    for (size_t s = 2; s + 2 <= n; ++s) {
        double ssr_low = 0;
        fit_intercept(d, 0, s, q, &ssr_low);
        const LineFit high = fit_line(d, s, n);
        const double cost = ssr_low + high.ssr;
        if (cost < best_cost) {
            best_cost = cost;
            best_split = s;
        }
    }

    double ssr_low = 0;
    const double c_low = fit_intercept(d, 0, best_split, q, &ssr_low);
    const LineFit high = fit_line(d, best_split, n);

    if (std::abs(high.slope - q) < 1e-6) throw NoCrossover("segments share the same exponent");
    const double log_i = (c_low - high.intercept) / (high.slope - q);
    if (log_i < d.x.front() || log_i > d.x.back()) throw NoCrossover("power laws intersect outside the data range");

    Crossover out;
    out.intensity = std::exp(log_i);
    out.split_index = static_cast<int>(best_split);
    out.low = PowerLawFit{q, 0.0, std::exp(c_low), 0.0};
    {
        double syy = 0, my = 0;
        for (size_t i = 0; i < best_split; ++i) my += d.y[i];
        my /= double(best_split);
        for (size_t i = 0; i < best_split; ++i) syy += (d.y[i] - my) * (d.y[i] - my);
        out.low.r2 = (syy > 0) ? 1.0 - ssr_low / syy : 1.0;
    }
    out.high = PowerLawFit{high.slope, high.slope_se, std::exp(high.intercept), high.r2};
    return out;
}

}  // namespace hhg::strongfield
