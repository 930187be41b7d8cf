#include "genfunc/mollifier.hpp"

#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>

#include "genfunc/errors.hpp"
#include "genfunc/fft.hpp"

namespace genfunc {

namespace {
constexpr double kDecayFloor = 1e-10;
std::mutex g_sup_cache_mutex;
}  // namespace

Mollifier Mollifier::build(const Params& params) {
    Mollifier m;
    m.params_ = params;
    if (!(params.r1 > 0.0) || !(params.r2 > params.r1))
        throw PreconditionError("mollifier: need 0 < r1 < r2");
    if (params.M < 0 || params.M > 8)
        throw PreconditionError("mollifier: M must be in 0..8");
    if (!is_power_of_two(params.ref_n) || params.ref_n < 64)
        throw PreconditionError("mollifier: ref_n must be a power of two >= 64");

    m.psi_profile_ = PlateauProfile(params.r1, params.r2, params.sharpness);
    m.chi_profile_ = PlateauProfile(1.0, 2.0, params.sharpness);

    const double R = params.ref_halfwidth;
    const std::size_t n = params.ref_n;
    m.ref_h_ = 2.0 * R / static_cast<double>(n);
    m.dxi_ = std::numbers::pi / R;
    const double nyquist = std::numbers::pi / m.ref_h_;
    if (params.r2 >= nyquist)
        throw PreconditionError("aliasing: r2 >= reference Nyquist frequency");

    // Active symbol samples psi(m * dxi), m >= 0.
    const auto m_active =
        static_cast<std::size_t>(std::ceil(params.r2 / m.dxi_)) + 1;
    m.psi_values_.resize(m_active);
    for (std::size_t i = 0; i < m_active; ++i)
        m.psi_values_[i] = m.psi(static_cast<double>(i) * m.dxi_);

    m.ref_nodes_.resize(n);
    m.rho_ref_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        m.ref_nodes_[j] = -R + static_cast<double>(j) * m.ref_h_;
        m.rho_ref_[j] = m.rho_deriv(0, m.ref_nodes_[j]);
    }

    // Validation: unit mass, vanishing moments, decay inside the box.
    Validation v;
    v.rho0 = m.rho_deriv(0, 0.0);
    double mass = 0.0;
    for (double r : m.rho_ref_) mass += r;
    mass *= m.ref_h_;
    v.mass_defect = std::abs(mass - 1.0);
    for (int mm = 1; mm <= params.M; ++mm) {
        double mom = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            mom += std::pow(m.ref_nodes_[j], mm) * m.rho_ref_[j];
        v.moment_defects.push_back(std::abs(mom * m.ref_h_));
    }
    v.boundary_value = std::max(std::abs(m.rho_ref_.front()),
                                std::abs(m.rho_ref_[n - 1]));
    // Decay radius: largest |v| at which |rho| still exceeds the floor.
    double radius = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(m.rho_ref_[j]) > kDecayFloor)
            radius = std::max(radius, std::abs(m.ref_nodes_[j]));
    v.decay_radius = radius;
    m.validation_ = v;

    if (!params.validate) return m;
    if (v.mass_defect > 1e-10)
        throw Error("moment-validation-failed: mass defect " +
                    std::to_string(v.mass_defect));
    for (std::size_t i = 0; i < v.moment_defects.size(); ++i)
        if (v.moment_defects[i] > 1e-8) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "moment-validation-failed: |int v^%zu rho| = %.3e "
                          "(box too small or r2 too close to Nyquist)",
                          i + 1, v.moment_defects[i]);
            throw Error(buf);
        }
    if (v.boundary_value > kDecayFloor)
        throw Error("moment-validation-failed: box too small (rho does not "
                    "decay at the reference boundary)");
    return m;
}

double Mollifier::rho_deriv(int j, double v) const {
    if (j < 0 || j > kMaxJet)
        throw PreconditionError("rho_deriv: order out of range");
    if (std::abs(v) > params_.ref_halfwidth) return 0.0;
    // rho^(j)(v) = (dxi/2pi) [ psi_0 * d_j0 + 2 sum_m psi_m xi_m^j
    //                          cos(v xi_m + j pi/2) ]
    const double phase = 0.5 * std::numbers::pi * static_cast<double>(j);
    double acc = (j == 0) ? psi_values_[0] : 0.0;
    for (std::size_t m = 1; m < psi_values_.size(); ++m) {
        if (psi_values_[m] == 0.0) continue;
        const double xi = static_cast<double>(m) * dxi_;
        acc += 2.0 * psi_values_[m] * std::pow(xi, j) *
               std::cos(v * xi + phase);
    }
    return acc * dxi_ / (2.0 * std::numbers::pi);
}

const std::vector<double>& Mollifier::rho_deriv_table(int j) const {
    if (j < 0 || j > kMaxJet)
        throw PreconditionError("rho_deriv_table: order out of range");
    std::lock_guard<std::mutex> lock(g_sup_cache_mutex);
    if (deriv_tables_.size() <= static_cast<std::size_t>(j))
        deriv_tables_.resize(static_cast<std::size_t>(j) + 1);
    auto& table = deriv_tables_[static_cast<std::size_t>(j)];
    if (table.empty()) {
        table.resize(ref_nodes_.size());
        for (std::size_t i = 0; i < ref_nodes_.size(); ++i)
            table[i] = rho_deriv(j, ref_nodes_[i]);
    }
    return table;
}

double Mollifier::rho_deriv_lookup(int j, double v) const {
    const double R = params_.ref_halfwidth;
    if (std::abs(v) >= R) return 0.0;
    const auto& table = rho_deriv_table(j);
    const double pos = (v + R) / ref_h_;
    const auto i = std::min(table.size() - 2, static_cast<std::size_t>(pos));
    const double u = pos - static_cast<double>(i);
    return (1.0 - u) * table[i] + u * table[i + 1];
}

double Mollifier::sup_rho_deriv(int j) const {
    std::lock_guard<std::mutex> lock(g_sup_cache_mutex);
    if (sup_cache_.size() <= static_cast<std::size_t>(j))
        sup_cache_.resize(static_cast<std::size_t>(j) + 1, -1.0);
    if (sup_cache_[static_cast<std::size_t>(j)] >= 0.0)
        return sup_cache_[static_cast<std::size_t>(j)];
    // Dense scan at a quarter of the reference spacing around the core.
    double s = 0.0;
    const double lim = std::min(params_.ref_halfwidth, validation_.decay_radius + 4.0);
    const double step = ref_h_ / 4.0;
    for (double v = 0.0; v <= lim; v += step)
        s = std::max(s, std::abs(rho_deriv(j, v)));
    sup_cache_[static_cast<std::size_t>(j)] = s;
    return s;
}

double Mollifier::theta_deriv(int j, double eps, double x) const {
    if (!(eps > 0.0) || eps >= 1.0)
        throw PreconditionError("theta: eps must be in (0,1)");
    const double lg = std::abs(std::log(eps));
    // Leibniz over the product rho(x/eps) * chi(|ln eps| x).
    const Jet cj = chi_profile_.jet(lg * x, j);
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
        // i derivatives on rho, j-i on chi
        if (i > 0) binom = binom * (j - i + 1) / i;
        const double rterm =
            std::pow(eps, -1 - i) * rho_deriv(i, x / eps);
        const double cterm =
            std::pow(lg, j - i) * cj[static_cast<std::size_t>(j - i)];
        acc += binom * rterm * cterm;
    }
    return acc;
}

double Mollifier::rho_eps_deriv(int j, double eps, double x) const {
    if (!(eps > 0.0) || eps > 1.0)
        throw PreconditionError("rho_eps: eps must be in (0,1]");
    return std::pow(eps, -1 - j) * rho_deriv(j, x / eps);
}

double Mollifier::moment_theta(int m, double eps) const {
    // int x^m theta_eps dx = eps^m sum_i v_i^m rho(v_i) chi(|ln eps| eps v_i) h
    const double lg = std::abs(std::log(eps));
    double acc = 0.0;
    for (std::size_t i = 0; i < ref_nodes_.size(); ++i) {
        const double v = ref_nodes_[i];
        double term = rho_ref_[i] * chi_profile_.value(lg * eps * v);
        if (m > 0) term *= std::pow(v, m);
        acc += term;
    }
    return acc * ref_h_ * std::pow(eps, m);
}

bool Mollifier::resolves(double eps, double h) const {
    return h <= eps * validation_.decay_radius / 8.0;
}

std::size_t Mollifier::trusted_prefix(const std::vector<double>& ladder,
                                      double h) const {
    std::size_t p = 0;
    for (double eps : ladder) {
        if (!resolves(eps, h)) break;
        ++p;
    }
    return p;
}

namespace {

GridFunction sample_tensor(const Box& target,
                           const std::function<double(double)>& f1d) {
    if (target.dim == 1) {
        std::vector<cplx> s(target.n);
        for (std::size_t j = 0; j < target.n; ++j)
            s[j] = f1d(target.node(0, j));
        return GridFunction(target, std::move(s));
    }
    std::vector<double> ax(target.n), ay(target.n);
    for (std::size_t j = 0; j < target.n; ++j) {
        ax[j] = f1d(target.node(0, j));
        ay[j] = f1d(target.node(1, j));
    }
    std::vector<cplx> s(target.total());
    for (std::size_t i = 0; i < target.n; ++i)
        for (std::size_t j = 0; j < target.n; ++j)
            s[i * target.n + j] = ax[i] * ay[j];
    return GridFunction(target, std::move(s));
}

}  // namespace

GridFunction Mollifier::theta(double eps, const Box& target,
                              bool allow_unresolved) const {
    if (!(eps > 0.0) || eps >= 1.0)
        throw PreconditionError("theta: eps must be in (0,1)");
    if (!allow_unresolved && !resolves(eps, target.h(0)))
        throw PreconditionError("under-resolved: h > eps * r_rho / 8");
    return sample_tensor(target,
                         [&](double x) { return theta_deriv(0, eps, x); });
}

GridFunction Mollifier::rho_eps(double eps, const Box& target,
                                bool allow_unresolved) const {
    if (!(eps > 0.0) || eps > 1.0)
        throw PreconditionError("rho_eps: eps must be in (0,1]");
    if (!allow_unresolved && !resolves(eps, target.h(0)))
        throw PreconditionError("under-resolved: h > eps * r_rho / 8");
    return sample_tensor(target,
                         [&](double x) { return rho_eps_deriv(0, eps, x); });
}

GridFunction Mollifier::rho_grid() const {
    const Box box = Box::make1d(-params_.ref_halfwidth, params_.ref_halfwidth,
                                params_.ref_n);
    std::vector<cplx> s(rho_ref_.begin(), rho_ref_.end());
    return GridFunction(box, std::move(s));
}

MomentReport check_moments(const Mollifier& m, const std::vector<double>& ladder,
                           int M, double slope_min, double floor,
                           std::size_t fit_points) {
    if (fit_points < 4)
        throw PreconditionError("check_moments: fit window needs >= 4 points");
    MomentReport report;
    report.slope_min = slope_min;
    report.floor = floor;
    report.passed = true;
    for (int mm = 0; mm <= M; ++mm) {
        MomentRow row;
        row.m = mm;
        for (double eps : ladder) {
            const double val = m.moment_theta(mm, eps);
            row.values.push_back(std::abs(mm == 0 ? val - 1.0 : val));
        }
        // Leading usable window: the decay steepens down the ladder, so the
        // fitted slope here is the smallest one the series supports.
        std::vector<double> vals, lad;
        for (std::size_t i = 0; i < row.values.size() && vals.size() < fit_points;
             ++i) {
            if (row.values[i] > floor) {
                vals.push_back(row.values[i]);
                lad.push_back(ladder[i]);
            }
        }
        row.below_floor = vals.empty();
        if (vals.size() < 4) {
            // Too few entries above the floor to support a fit: the moment
            // is numerically dead, which is a pass.
            row.pass = true;
            row.fit.exponent = negligible_sentinel();
        } else {
            row.fit = fit_growth(vals, lad, floor);
            row.pass = -row.fit.exponent >= slope_min;
        }
        report.passed = report.passed && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace genfunc
