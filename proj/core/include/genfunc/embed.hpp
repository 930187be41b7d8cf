#pragma once

#include <memory>
#include <string>
#include <vector>

#include "genfunc/bump.hpp"
#include "genfunc/grid.hpp"
#include "genfunc/mollifier.hpp"
#include "genfunc/scales.hpp"

namespace genfunc {

/// Distribution classes a catalog entry may belong to; membership gates
/// which embeddings apply.
struct ClassTags {
    bool compact = false;   // E'
    bool om = false;        // O'_M (rapidly decreasing distributions)
    bool oc = false;        // O'_C
    bool tempered = false;  // S'
    bool schwartz = false;  // S
    bool smooth = false;    // C^infinity
};

/// A catalog test distribution together with its analytic convolution rule.
/// Only the catalog (plus shifts and linear combinations at the net level)
/// is supported; the rules are what keeps every embedded frame exact.
struct DistributionSpec {
    enum class Tag { delta_deriv, heaviside, smooth, cont_deriv, weighted_poly };
    enum class Base { none, gaussian, bump, square, zero, ramp, absval, exp_kink };

    Tag tag = Tag::smooth;
    int k = 0;        // delta derivative order (<= 3)
    int alpha = 0;    // outer derivative order for cont_deriv / weighted_poly
    Base base = Base::none;
    double shift = 0.0;
    ClassTags cls;

    static DistributionSpec delta(int k = 0, double shift = 0.0);
    static DistributionSpec heaviside(double shift = 0.0);
    static DistributionSpec smooth(Base base);
    static DistributionSpec cont_deriv(Base base, int alpha);
    static DistributionSpec weighted_poly(int alpha);

    std::string describe() const;
};

/// Parses catalog names used by the CLI: delta, delta1, delta2, heaviside,
/// gaussian, bump, square, zero, ramp2, wpoly1, ...
DistributionSpec parse_spec(const std::string& name);

enum class EmbedKind { sigma, iota, iota_S, iota_Sprime, iota_CS };
std::string embed_kind_str(EmbedKind k);

struct EmbeddingResult {
    EpsilonNet net;
    EmbedKind which = EmbedKind::sigma;
    std::string source;
};

/// Constant-in-epsilon embedding of a smooth catalog entry.
EmbeddingResult embed_sigma(const DistributionSpec& f,
                            const std::vector<double>& ladder, const Box& box,
                            unsigned jobs = 1);

/// T -> (T * theta_eps)_eps with theta the chi-damped scaled mollifier; the
/// frames follow the spec's convolution rule exactly (delta derivatives
/// sample derivative jets of theta, Heaviside uses cumulative quadrature,
/// smooth entries reference-grid quadrature).
EmbeddingResult embed_iota(const DistributionSpec& T, const Mollifier& mol,
                           const std::vector<double>& ladder, const Box& box,
                           unsigned jobs = 1);

/// u -> (u * rho_eps)_eps for rapidly decreasing distributions (no cutoff).
EmbeddingResult embed_iota_S(const DistributionSpec& u, const Mollifier& mol,
                             const std::vector<double>& ladder, const Box& box,
                             unsigned jobs = 1);

/// u -> ((u * rho_eps) psi(eps .))_eps for tempered distributions.
EmbeddingResult embed_iota_Sprime(const DistributionSpec& u,
                                  const Mollifier& mol,
                                  const std::vector<double>& ladder,
                                  const Box& box, unsigned jobs = 1);

/// Tensor-product embeddings for d = 2 boxes: the entry is fx (x) fy.
EmbeddingResult embed_sigma2(const DistributionSpec& fx,
                             const DistributionSpec& fy,
                             const std::vector<double>& ladder, const Box& box,
                             unsigned jobs = 1);
EmbeddingResult embed_iota2(const DistributionSpec& Tx,
                            const DistributionSpec& Ty, const Mollifier& mol,
                            const std::vector<double>& ladder, const Box& box,
                            unsigned jobs = 1);

/// Compact-support embedding: multiplies frames by the cutoff kappa (== 1 on
/// a neighborhood of the common support). Throws "support-not-contained"
/// when frames exceed the plateau by more than the floor.
EmbeddingResult embed_iota_CS(const EmbeddingResult& u,
                              const PlateauProfile& kappa, unsigned jobs = 1,
                              double floor = 1e-13);

/// a*A + b*B at the net level, evaluators combined when both carry one.
EmbeddingResult embed_combination(const EmbeddingResult& A,
                                  const EmbeddingResult& B, cplx a, cplx b);

/// Derivative of an embedded net; evaluator-backed nets resample the exact
/// derivative jets, plain nets fall back to the grid scheme.
EpsilonNet net_derivative(const EpsilonNet& net, int axis, int order,
                          DerivScheme scheme = DerivScheme::spectral,
                          unsigned jobs = 1);

/// Scales every frame by eps_k^{-c} (synthetic growth injection).
EpsilonNet net_power_scaled(const EpsilonNet& net, double c);

/// Synthetic net f(x / eps_k^p): derivatives grow like eps^{-p l}.
EpsilonNet net_dilated(DistributionSpec::Base base,
                       const std::vector<double>& ladder, const Box& box,
                       double p, unsigned jobs = 1);

struct G1Report {
    double b_hat = 0.0;    // max_l (N-hat(l) - l)
    double slope = 0.0;    // least-squares slope of N-hat(l)
    bool pass = false;
    GrowthProfile profile;
};

/// Prop.-2.12-style bound for iota images: every embedded distribution must
/// fit N(l) <= l + b. Pass iff b_hat <= b_max and slope <= 1.25.
G1Report check_G1(const EmbeddingResult& result, const Box& K, int L,
                  double b_max = 3.0, FitWindow window = {}, unsigned jobs = 1);

/// Access to the catalog's smooth functions (shared with tests/tools).
class SmoothFunction {
public:
    explicit SmoothFunction(DistributionSpec::Base base);
    double jet(int order, double x) const;
    /// |f| is below 1e-18 outside this radius (infinite for polynomials).
    double support_radius() const { return radius_; }
    DistributionSpec::Base base() const { return base_; }

private:
    DistributionSpec::Base base_;
    double radius_ = 0.0;
    BumpFunction bump_;
};

}  // namespace genfunc
