#include "genfunc/scales.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <sstream>

#include "genfunc/errors.hpp"

namespace genfunc {

ScaleSequence ScaleSequence::constant(double b) {
    ScaleSequence s;
    s.kind = Kind::constant;
    s.b = b;
    return s;
}

ScaleSequence ScaleSequence::affine(double a, double b) {
    ScaleSequence s;
    s.kind = Kind::affine;
    s.a = a;
    s.b = b;
    return s;
}

ScaleSequence ScaleSequence::log_affine(double a, double b) {
    ScaleSequence s;
    s.kind = Kind::log_affine;
    s.a = a;
    s.b = b;
    return s;
}

ScaleSequence ScaleSequence::tabulated(std::vector<double> values) {
    ScaleSequence s;
    s.kind = Kind::tabulated;
    s.table = std::move(values);
    return s;
}

double ScaleSequence::eval(int n) const {
    if (n < 0) throw PreconditionError("evaluation-out-of-range: n < 0");
    double v = 0.0;
    switch (kind) {
        case Kind::constant: v = b; break;
        case Kind::affine: v = a * n + b; break;
        case Kind::log_affine: v = a * std::log(std::max(n, 1)) + b; break;
        case Kind::tabulated:
            if (static_cast<std::size_t>(n) >= table.size())
                throw Error("evaluation-out-of-range: tabulated sequence of length " +
                            std::to_string(table.size()));
            v = table[static_cast<std::size_t>(n)];
            break;
    }
    if (v < 0.0)
        throw PreconditionError("scale-sequence-negative: N(" +
                                std::to_string(n) + ") < 0");
    return v;
}

int ScaleSequence::max_index() const {
    if (kind == Kind::tabulated) return static_cast<int>(table.size()) - 1;
    return INT_MAX;
}

std::string ScaleSequence::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::constant: os << b; break;
        case Kind::affine: os << a << "*n+" << b; break;
        case Kind::log_affine: os << a << "*ln(n)+" << b; break;
        case Kind::tabulated: os << "table[" << table.size() << "]"; break;
    }
    return os.str();
}

bool leq(const ScaleSequence& n1, const ScaleSequence& n2, int n_max) {
    if (n1.max_index() < n_max || n2.max_index() < n_max)
        throw Error("evaluation-out-of-range: sequences shorter than n_max");
    for (int n = 0; n <= n_max; ++n)
        if (n1.eval(n) > n2.eval(n)) return false;
    return true;
}

std::string family_name_str(FamilyName name) {
    switch (name) {
        case FamilyName::bounded: return "bounded";
        case FamilyName::affine: return "affine";
        case FamilyName::r1: return "r1";
        case FamilyName::ra: return "ra";
        case FamilyName::log1: return "log1";
        case FamilyName::log_plain: return "log";
        case FamilyName::full: return "full";
    }
    return "?";
}

std::optional<FamilyName> family_name_parse(const std::string& s) {
    if (s == "bounded" || s == "b") return FamilyName::bounded;
    if (s == "affine" || s == "a") return FamilyName::affine;
    if (s == "r1") return FamilyName::r1;
    if (s == "ra") return FamilyName::ra;
    if (s == "log1") return FamilyName::log1;
    if (s == "log") return FamilyName::log_plain;
    if (s == "full") return FamilyName::full;
    return std::nullopt;
}

RegularScaleFamily::RegularScaleFamily(FamilyName name, double a)
    : name_(name), a_(a) {
    switch (name) {
        case FamilyName::bounded:
            generators_ = {ScaleSequence::constant(0.0),
                           ScaleSequence::constant(3.0)};
            break;
        case FamilyName::affine:
            generators_ = {ScaleSequence::affine(1.0, 0.0),
                           ScaleSequence::affine(2.0, 1.0)};
            break;
        case FamilyName::r1:
            generators_ = {ScaleSequence::affine(1.0, 1.0),
                           ScaleSequence::constant(1.0)};
            break;
        case FamilyName::ra:
            // slopes strictly below a, scaled to keep the ladder nontrivial
            generators_ = {ScaleSequence::affine(0.5 * a, 0.0),
                           ScaleSequence::affine(0.75 * a, 2.0)};
            break;
        case FamilyName::log1:
            generators_ = {ScaleSequence::log_affine(1.0, 1.0),
                           ScaleSequence::log_affine(2.0, 0.0)};
            break;
        case FamilyName::log_plain:
            // Intercept 10: the closure defect ln(l1*l2/(l1+l2)) + 2b must
            // exceed b_max within the finite range for the failure to be
            // visible at all.
            generators_ = {ScaleSequence::log_affine(1.0, 10.0)};
            break;
        case FamilyName::full:
            generators_ = {ScaleSequence::affine(1.0, 0.0)};
            break;
    }
}

void RegularScaleFamily::set_generators(std::vector<ScaleSequence> gens) {
    if (gens.empty())
        throw PreconditionError("generator-set-empty");
    generators_ = std::move(gens);
}

std::vector<ScaleSequence> RegularScaleFamily::candidates(
    const SearchBounds& bounds) const {
    std::vector<ScaleSequence> out;
    const auto bs = static_cast<int>(std::floor(bounds.b_max / bounds.grid_step));
    const auto as = static_cast<int>(std::floor(bounds.a_max / bounds.grid_step));
    auto b_of = [&](int i) { return i * bounds.grid_step; };
    switch (name_) {
        case FamilyName::bounded:
            for (int i = 0; i <= bs; ++i)
                out.push_back(ScaleSequence::constant(b_of(i)));
            break;
        case FamilyName::affine:
            for (int j = 0; j <= as; ++j)
                for (int i = 0; i <= bs; ++i)
                    out.push_back(ScaleSequence::affine(b_of(j), b_of(i)));
            break;
        case FamilyName::r1:
            for (int i = 0; i <= bs; ++i)
                out.push_back(ScaleSequence::affine(1.0, b_of(i)));
            break;
        case FamilyName::ra:
            for (int j = 0; j <= as && b_of(j) < a_; ++j)
                for (int i = 0; i <= bs; ++i)
                    out.push_back(ScaleSequence::affine(b_of(j), b_of(i)));
            break;
        case FamilyName::log1:
            for (int j = 0; j <= as; ++j)
                for (int i = 0; i <= bs; ++i)
                    out.push_back(ScaleSequence::log_affine(b_of(j), b_of(i)));
            break;
        case FamilyName::log_plain:
            for (int i = 0; i <= bs; ++i)
                out.push_back(ScaleSequence::log_affine(1.0, b_of(i)));
            break;
        case FamilyName::full:
            break;  // handled by callers: any target dominates itself
    }
    return out;
}

std::string RegularScaleFamily::describe() const {
    std::string s = family_name_str(name_);
    if (name_ == FamilyName::ra) s += "(" + std::to_string(a_) + ")";
    return s;
}

const AxiomInstance* AxiomReport::first_failure() const {
    for (const auto& inst : instances)
        if (!inst.ok) return &inst;
    return nullptr;
}

namespace {

// Searches candidates (in order) for one dominating `target` on 0..n_max.
// On failure fills the witness-of-violation fields from the best candidate.
void search_dominating(const RegularScaleFamily& family,
                       const SearchBounds& bounds,
                       const std::vector<double>& target, AxiomInstance& inst) {
    const int n_max = static_cast<int>(target.size()) - 1;
    if (family.name() == FamilyName::full) {
        inst.ok = true;
        inst.witness = ScaleSequence::tabulated(target);
        return;
    }
    const auto cands = family.candidates(bounds);
    double best_violation = std::numeric_limits<double>::infinity();
    for (const auto& cand : cands) {
        double worst = 0.0;
        int worst_n = 0;
        for (int n = 0; n <= n_max; ++n) {
            const double gap = target[static_cast<std::size_t>(n)] - cand.eval(n);
            if (gap > worst) {
                worst = gap;
                worst_n = n;
            }
        }
        if (worst <= 0.0) {
            inst.ok = true;
            inst.witness = cand;
            return;
        }
        if (worst < best_violation) {
            best_violation = worst;
            inst.best_candidate = cand;
            inst.fail_l1 = worst_n;
            inst.fail_l2 = -1;
            inst.fail_lhs = target[static_cast<std::size_t>(worst_n)];
            inst.fail_rhs = cand.eval(worst_n);
        }
    }
    inst.ok = false;
}

}  // namespace

AxiomReport check_overstability(const RegularScaleFamily& family, int n_max,
                                int k_max, const SearchBounds& bounds_in) {
    if (n_max < 4) throw PreconditionError("range-too-small: n_max < 4");
    if (k_max < 2) throw PreconditionError("range-too-small: k_max < 2");
    if (family.generators().empty())
        throw PreconditionError("generator-set-empty");
    SearchBounds bounds = bounds_in;
    bounds.n_max = n_max;
    bounds.k_max = k_max;

    AxiomReport report;
    report.axiom = AxiomKind::translation;
    report.family = family.name();
    report.bounds = bounds;
    report.passed = true;
    for (std::size_t g = 0; g < family.generators().size(); ++g) {
        const auto& gen = family.generators()[g];
        for (int k = 0; k <= k_max; ++k) {
            for (int kp = 0; kp <= k_max; ++kp) {
                AxiomInstance inst;
                inst.gen1 = static_cast<int>(g);
                inst.k = k;
                inst.kp = kp;
                std::vector<double> target(static_cast<std::size_t>(n_max) + 1);
                for (int n = 0; n <= n_max; ++n)
                    target[static_cast<std::size_t>(n)] = gen.eval(n + k) + kp;
                search_dominating(family, bounds, target, inst);
                report.passed = report.passed && inst.ok;
                report.instances.push_back(std::move(inst));
            }
        }
    }
    return report;
}

AxiomReport check_max_stability(const RegularScaleFamily& family, int n_max,
                                const SearchBounds& bounds_in) {
    if (n_max < 4) throw PreconditionError("range-too-small: n_max < 4");
    SearchBounds bounds = bounds_in;
    bounds.n_max = n_max;

    AxiomReport report;
    report.axiom = AxiomKind::max;
    report.family = family.name();
    report.bounds = bounds;
    report.passed = true;
    const auto& gens = family.generators();
    for (std::size_t g1 = 0; g1 < gens.size(); ++g1) {
        for (std::size_t g2 = g1; g2 < gens.size(); ++g2) {
            AxiomInstance inst;
            inst.gen1 = static_cast<int>(g1);
            inst.gen2 = static_cast<int>(g2);
            std::vector<double> target(static_cast<std::size_t>(n_max) + 1);
            for (int n = 0; n <= n_max; ++n)
                target[static_cast<std::size_t>(n)] =
                    std::max(gens[g1].eval(n), gens[g2].eval(n));
            search_dominating(family, bounds, target, inst);
            report.passed = report.passed && inst.ok;
            report.instances.push_back(std::move(inst));
        }
    }
    return report;
}

AxiomReport check_superadditive_closure(const RegularScaleFamily& family,
                                        int n_max, double b_max,
                                        const SearchBounds& bounds_in) {
    if (n_max < 8) throw PreconditionError("range-too-small: n_max < 8");
    SearchBounds bounds = bounds_in;
    bounds.n_max = n_max;
    bounds.b_max = b_max;

    AxiomReport report;
    report.axiom = AxiomKind::superadditive;
    report.family = family.name();
    report.bounds = bounds;
    report.passed = true;
    const auto& gens = family.generators();
    for (std::size_t g1 = 0; g1 < gens.size(); ++g1) {
        for (std::size_t g2 = g1; g2 < gens.size(); ++g2) {
            AxiomInstance inst;
            inst.gen1 = static_cast<int>(g1);
            inst.gen2 = static_cast<int>(g2);

            if (family.name() == FamilyName::full) {
                inst.ok = true;
                report.instances.push_back(std::move(inst));
                continue;
            }
            const auto cands = family.candidates(bounds);
            double best_violation = std::numeric_limits<double>::infinity();
            bool found = false;
            for (const auto& cand : cands) {
                double worst = 0.0;
                int w1 = 0, w2 = 0;
                for (int l1 = 0; l1 <= n_max; ++l1) {
                    for (int l2 = 0; l1 + l2 <= n_max; ++l2) {
                        const double gap = gens[g1].eval(l1) +
                                           gens[g2].eval(l2) -
                                           cand.eval(l1 + l2);
                        if (gap > worst) {
                            worst = gap;
                            w1 = l1;
                            w2 = l2;
                        }
                    }
                }
                if (worst <= 0.0) {
                    inst.ok = true;
                    inst.witness = cand;
                    found = true;
                    break;
                }
                if (worst < best_violation) {
                    best_violation = worst;
                    inst.best_candidate = cand;
                    inst.fail_l1 = w1;
                    inst.fail_l2 = w2;
                    inst.fail_lhs = gens[g1].eval(w1) + gens[g2].eval(w2);
                    inst.fail_rhs = inst.best_candidate->eval(w1 + w2);
                }
            }
            inst.ok = found;
            report.passed = report.passed && inst.ok;
            report.instances.push_back(std::move(inst));
        }
    }
    return report;
}

bool reproduce_violation(const AxiomReport& report, const AxiomInstance& inst,
                         const RegularScaleFamily& family) {
    if (inst.ok || !inst.best_candidate) return false;
    const auto& gens = family.generators();
    double lhs = 0.0;
    if (report.axiom == AxiomKind::superadditive) {
        lhs = gens[static_cast<std::size_t>(inst.gen1)].eval(inst.fail_l1) +
              gens[static_cast<std::size_t>(inst.gen2)].eval(inst.fail_l2);
        const double rhs = inst.best_candidate->eval(inst.fail_l1 + inst.fail_l2);
        return lhs == inst.fail_lhs && rhs == inst.fail_rhs && lhs > rhs;
    }
    if (report.axiom == AxiomKind::translation) {
        lhs = gens[static_cast<std::size_t>(inst.gen1)].eval(inst.fail_l1 + inst.k) +
              inst.kp;
    } else {
        lhs = std::max(gens[static_cast<std::size_t>(inst.gen1)].eval(inst.fail_l1),
                       gens[static_cast<std::size_t>(inst.gen2)].eval(inst.fail_l1));
    }
    const double rhs = inst.best_candidate->eval(inst.fail_l1);
    return lhs == inst.fail_lhs && rhs == inst.fail_rhs && lhs > rhs;
}

ClassifyOptions::ClassifyOptions() {
    for (double a = 0.25; a <= 5.0 + 1e-12; a += 0.25) a_grid.push_back(a);
}

namespace {

double max_forward_step(const std::vector<double>& e) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        m = std::max(m, e[i + 1] - e[i]);
    return m;
}

bool dominated_by(const std::vector<double>& e, double slope, double b_cap) {
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] - slope * static_cast<double>(i) > b_cap) return false;
    return true;
}

}  // namespace

bool profile_in_family(const std::vector<double>& e, FamilyName name, double a,
                       const ClassifyOptions& opt) {
    if (e.empty()) return true;
    switch (name) {
        case FamilyName::bounded: {
            double m = 0.0;
            for (double v : e) m = std::max(m, v - e[0]);
            return m <= opt.tol;
        }
        case FamilyName::r1:
            return dominated_by(e, 1.0, opt.b_max) &&
                   max_forward_step(e) <= 1.0 + opt.tol;
        case FamilyName::ra: {
            for (double ap : opt.a_grid) {
                if (ap >= a) break;
                if (dominated_by(e, ap, opt.b_max) &&
                    max_forward_step(e) <= ap + opt.tol)
                    return true;
            }
            return false;
        }
        case FamilyName::full: return true;
        case FamilyName::affine:
        case FamilyName::log1:
        case FamilyName::log_plain:
            throw PreconditionError(
                "classification only ranges over bounded < r1 < ra < full");
    }
    return false;
}

int family_order(FamilyName name, double a, const ClassifyOptions& opt) {
    switch (name) {
        case FamilyName::bounded: return 0;
        case FamilyName::r1: return 1;
        case FamilyName::ra: {
            int idx = 2;
            for (double g : opt.a_grid) {
                if (std::abs(g - a) < 1e-12) return idx;
                ++idx;
            }
            return idx;
        }
        case FamilyName::full: return 2 + static_cast<int>(opt.a_grid.size());
        default: return INT_MAX;
    }
}

ClassifyResult classify_profile(const std::vector<double>& exponents,
                                const std::vector<double>& residuals,
                                const ClassifyOptions& opt) {
    if (exponents.size() < 4)
        throw PreconditionError("profile-too-short: need >= 4 indices");

    ClassifyResult res;
    // A profile entirely below the numerical floor carries the -inf sentinel;
    // such a net is negligible at this resolution and trivially bounded.
    const bool all_sentinel = std::all_of(
        exponents.begin(), exponents.end(),
        [](double v) { return v == -std::numeric_limits<double>::infinity(); });
    if (all_sentinel) {
        res.family = FamilyName::bounded;
        res.negligible = true;
        return res;
    }
    for (double v : exponents)
        if (!std::isfinite(v))
            throw UnclassifiableError("unclassifiable: non-finite exponent");
    for (double r : residuals)
        if (!(r <= opt.residual_max))
            throw UnclassifiableError(
                "unclassifiable: residual above validity threshold");

    // Least-squares affine fit of the profile.
    const auto n = static_cast<double>(exponents.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        const auto x = static_cast<double>(i);
        sx += x;
        sy += exponents[i];
        sxx += x * x;
        sxy += x * exponents[i];
    }
    const double denom = n * sxx - sx * sx;
    res.fit.slope = (n * sxy - sx * sy) / denom;
    res.fit.intercept = (sy - res.fit.slope * sx) / n;

    if (profile_in_family(exponents, FamilyName::bounded, 0.0, opt)) {
        res.family = FamilyName::bounded;
        res.fit.b_hat = *std::max_element(exponents.begin(), exponents.end());
        return res;
    }
    if (profile_in_family(exponents, FamilyName::r1, 0.0, opt)) {
        res.family = FamilyName::r1;
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < exponents.size(); ++i)
            m = std::max(m, exponents[i] - static_cast<double>(i));
        res.fit.b_hat = m;
        return res;
    }
    for (double a : opt.a_grid) {
        if (profile_in_family(exponents, FamilyName::ra, a, opt)) {
            res.family = FamilyName::ra;
            res.a = a;
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < exponents.size(); ++i)
                m = std::max(m, exponents[i] - a * static_cast<double>(i));
            res.fit.b_hat = m;
            return res;
        }
    }
    res.family = FamilyName::full;
    res.fit.b_hat = *std::max_element(exponents.begin(), exponents.end());
    return res;
}

double q_variation(const std::vector<double>& profile, int Q, int L) {
    double m = 0.0;
    for (int l = 0; l <= L; ++l)
        for (int q = 0; q <= Q; ++q)
            m = std::max(m, std::abs(profile[static_cast<std::size_t>(q * (L + 1) + l)] -
                                     profile[static_cast<std::size_t>(l)]));
    return m;
}

double l_variation(const std::vector<double>& profile, int Q, int L) {
    double m = 0.0;
    for (int q = 0; q <= Q; ++q)
        for (int l = 0; l <= L; ++l)
            m = std::max(m, std::abs(profile[static_cast<std::size_t>(q * (L + 1) + l)] -
                                     profile[static_cast<std::size_t>(q * (L + 1))]));
    return m;
}

bool TwoIndexScaleFamily::contains(const std::vector<double>& profile, int Q,
                                   int L, const ClassifyOptions& opt) const {
    if (profile.size() != static_cast<std::size_t>((Q + 1) * (L + 1)))
        throw PreconditionError("two-index profile size mismatch");
    auto marginal_l = [&] {
        // worst case over q of the l-profile
        std::vector<double> out(static_cast<std::size_t>(L) + 1,
                                -std::numeric_limits<double>::infinity());
        for (int q = 0; q <= Q; ++q)
            for (int l = 0; l <= L; ++l)
                out[static_cast<std::size_t>(l)] =
                    std::max(out[static_cast<std::size_t>(l)],
                             profile[static_cast<std::size_t>(q * (L + 1) + l)]);
        return out;
    };
    auto marginal_q = [&] {
        std::vector<double> out(static_cast<std::size_t>(Q) + 1,
                                -std::numeric_limits<double>::infinity());
        for (int q = 0; q <= Q; ++q)
            for (int l = 0; l <= L; ++l)
                out[static_cast<std::size_t>(q)] =
                    std::max(out[static_cast<std::size_t>(q)],
                             profile[static_cast<std::size_t>(q * (L + 1) + l)]);
        return out;
    };
    switch (lift) {
        case Lift::full: return true;
        case Lift::bounded: {
            double base0 = profile[0], m = 0.0;
            for (double v : profile) m = std::max(m, v - base0);
            return m <= opt.tol;
        }
        case Lift::u_lift:
            return q_variation(profile, Q, L) <= opt.tol &&
                   profile_in_family(marginal_l(), base, base_a, opt);
        case Lift::d_lift:
            return l_variation(profile, Q, L) <= opt.tol &&
                   profile_in_family(marginal_q(), base, base_a, opt);
    }
    return false;
}

}  // namespace genfunc
