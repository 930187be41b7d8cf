#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "genfunc/fft.hpp"

namespace genfunc {

/// Uniform periodic-convention sampling box: nodes x_j = lo + j*h,
/// j = 0..n-1, h = (hi-lo)/n, the right endpoint excluded. d in {1,2},
/// n a power of two shared by both axes.
struct Box {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
    std::size_t n = 0;

    static Box make1d(double lo, double hi, std::size_t n);
    static Box make2d(double lo0, double hi0, double lo1, double hi1,
                      std::size_t n);
    /// Symmetric [-half, half]^d box.
    static Box symmetric(int dim, double half, std::size_t n);

    double h(int axis) const { return (hi[static_cast<std::size_t>(axis)] -
                                       lo[static_cast<std::size_t>(axis)]) /
                                      static_cast<double>(n); }
    double node(int axis, std::size_t j) const {
        return lo[static_cast<std::size_t>(axis)] +
               static_cast<double>(j) * h(axis);
    }
    std::size_t total() const { return dim == 1 ? n : n * n; }
    bool contains(const Box& sub) const;
    /// Index range [first, last] of nodes inside [a, b] on an axis.
    std::pair<std::size_t, std::size_t> node_range(int axis, double a,
                                                   double b) const;
    bool operator==(const Box& other) const;

    /// Central sub-box of half the extent per axis (default profile window).
    Box central_half() const;
};

/// One sampled frame of a net. Row-major in d=2: index = i0*n + i1.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Box box, std::vector<cplx> samples);
    /// Zero-initialized.
    explicit GridFunction(Box box);

    const Box& box() const { return box_; }
    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<cplx>& samples() { return samples_; }
    cplx at(std::size_t i0, std::size_t i1 = 0) const {
        return box_.dim == 1 ? samples_[i0] : samples_[i0 * box_.n + i1];
    }
    double sup_abs() const;
    /// Largest |f| over the outermost node layer.
    double boundary_abs() const;

private:
    Box box_;
    std::vector<cplx> samples_;
};

enum class DerivScheme { fd4, spectral };

/// Discrete partial derivative of the given order along one axis. fd4 uses
/// centered 4th-order stencils with one-sided closures at the boundary;
/// spectral multiplies by (i*xi)^order in frequency space and requires the
/// frame to decay at the box boundary.
GridFunction derivative(const GridFunction& g, int axis, int order,
                        DerivScheme scheme);

/// --- analytic frame evaluators --------------------------------------------

/// Evaluates one 1-d factor of a net's frames anywhere, including all
/// derivatives: the hook that keeps seminorms of embedded nets exact when
/// the epsilon-scale features fall between grid nodes.
class Evaluator1D {
public:
    virtual ~Evaluator1D() = default;
    /// d^order/dx^order of factor of frame k at x.
    virtual cplx jet(std::size_t k, int order, double x) const = 0;
    /// Additional sample positions resolving frame k's features in [a, b].
    virtual std::vector<double> adapted_nodes(std::size_t k, double a,
                                              double b) const {
        (void)k; (void)a; (void)b;
        return {};
    }
};

/// d=1 nets use `fx` alone; d=2 nets are tensor products fx(x0)*fy(x1).
struct NetEvaluator {
    std::shared_ptr<const Evaluator1D> fx;
    std::shared_ptr<const Evaluator1D> fy;
};

enum class Side { space, frequency };

/// An epsilon-parametrized net of grid frames over a shared box: the
/// computational representative of a generalized function.
class EpsilonNet {
public:
    EpsilonNet(Box box, std::vector<double> ladder,
               std::vector<GridFunction> frames, Side side);

    const Box& box() const { return box_; }
    const std::vector<double>& ladder() const { return ladder_; }
    const GridFunction& frame(std::size_t k) const { return frames_[k]; }
    std::size_t size() const { return ladder_.size(); }
    Side side() const { return side_; }

    /// Number of leading ladder entries whose frames are grid-faithful
    /// (the construction's features are resolved by this box). Exponent
    /// fits restrict to this prefix unless overridden.
    std::size_t trusted_prefix() const { return trusted_prefix_; }
    void set_trusted_prefix(std::size_t p);

    const std::shared_ptr<const NetEvaluator>& evaluator() const {
        return evaluator_;
    }
    void set_evaluator(std::shared_ptr<const NetEvaluator> ev) {
        evaluator_ = std::move(ev);
    }

    /// Frame-wise linear combination a*this + b*other (evaluators dropped
    /// unless re-attached by the caller).
    EpsilonNet combine(const EpsilonNet& other, cplx a, cplx b) const;
    /// Multiplies every frame by the per-epsilon scalar factors[k].
    EpsilonNet scaled(const std::vector<cplx>& factors) const;

private:
    Box box_;
    std::vector<double> ladder_;
    std::vector<GridFunction> frames_;
    Side side_;
    std::size_t trusted_prefix_ = 0;
    std::shared_ptr<const NetEvaluator> evaluator_;
};

/// Builds the geometric ladder eps_k = 2^-k, k = k_min..k_max.
std::vector<double> dyadic_ladder(int k_min, int k_max);

/// Samples frames (order-0 jets) of an evaluator on the box for each ladder
/// epsilon; trusted prefix set by the caller afterwards if not full.
EpsilonNet net_from_evaluator(const Box& box, std::vector<double> ladder,
                              std::shared_ptr<const NetEvaluator> ev, Side side,
                              unsigned jobs = 1);

/// --- seminorms --------------------------------------------------------------

/// p_{K,l}: max over grid nodes in K and all |alpha| <= l of |d^alpha g|.
double seminorm_p(const GridFunction& g, const Box& K, int l,
                  DerivScheme scheme);

/// mu_{q,l}: sup over the whole box of (1+|x|)^q max_{|alpha|<=l} |d^alpha g|.
double seminorm_mu(const GridFunction& g, int q, int l, DerivScheme scheme);

/// Net-aware seminorms: use the analytic evaluator when the net carries one
/// (sups taken over grid nodes plus epsilon-adapted nodes), otherwise the
/// grid scheme.
double net_seminorm_p(const EpsilonNet& net, std::size_t k, const Box& K,
                      int l, DerivScheme scheme = DerivScheme::fd4);
double net_seminorm_mu(const EpsilonNet& net, std::size_t k, int q, int l,
                       DerivScheme scheme = DerivScheme::fd4);

/// --- growth fitting ---------------------------------------------------------

struct FitResult {
    double exponent = 0.0;   // N-hat: value ~ C * eps^{-exponent}
    double log_c = 0.0;      // natural log of C
    double residual = 0.0;   // RMS residual of the log-log fit
};

/// Sentinel exponent for series entirely below the numerical floor.
double negligible_sentinel();

/// Least-squares fit of log(value) against log(1/eps). Values at or below
/// `floor` are excluded; if more than half lie below, the series counts as
/// numerically negligible and the sentinel is returned. Fewer than 4 usable
/// pairs raises "insufficient-points".
FitResult fit_growth(const std::vector<double>& values,
                     const std::vector<double>& ladder, double floor = 1e-13);

/// Ladder window [lo, hi) used by profile fits.
struct FitWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;  // 0 = auto
    bool automatic() const { return hi == 0; }
};

/// Auto policy: the trusted prefix, extended to at least 4 points and
/// clipped to the ladder.
FitWindow resolve_window(const EpsilonNet& net, FitWindow requested);

enum class ProfileAxis { space_l, weight_q, two_index };

struct GrowthProfile {
    ProfileAxis axis = ProfileAxis::space_l;
    int Q = 0;  // weight-order range (0..Q); 0 for space profiles
    int L = 0;  // derivative-order range (0..L); 0 for rough profiles
    /// Row-major (Q+1) x (L+1) for two_index, otherwise length L+1 or Q+1.
    std::vector<FitResult> entries;
    std::size_t ladder_lo = 0, ladder_hi = 0;

    const FitResult& at(int q, int l) const {
        return entries[static_cast<std::size_t>(q * (L + 1) + l)];
    }
    std::vector<double> exponents() const;
    std::vector<double> residuals() const;
};

/// l -> fitted exponent of p_{K,l} over the ladder window, l = 0..L.
GrowthProfile profile_space(const EpsilonNet& net, const Box& K, int L,
                            DerivScheme scheme = DerivScheme::fd4,
                            FitWindow window = {}, double floor = 1e-13,
                            unsigned jobs = 1);

/// (q,l) -> fitted exponent of mu_{q,l}, q = 0..Q, l = 0..L. Requires the
/// frames to decay at the box boundary (S-regime).
GrowthProfile profile_decay(const EpsilonNet& net, int Q, int L,
                            DerivScheme scheme = DerivScheme::fd4,
                            FitWindow window = {}, double floor = 1e-13,
                            unsigned jobs = 1);

/// --- negligibility ----------------------------------------------------------

struct NegligibilityMode {
    enum class Kind { space, decay } kind = Kind::space;
    Box K;      // space mode
    int Q = 4;  // decay mode

    static NegligibilityMode space(Box K);
    static NegligibilityMode decay(int Q);
};

/// Zero-derivative-order test (the box reduction): every tested seminorm
/// series either sits below the floor or decays with fitted slope >= m_max.
bool is_negligible(const EpsilonNet& net, const NegligibilityMode& mode,
                   int m_max = 4, double floor = 1e-13,
                   DerivScheme scheme = DerivScheme::fd4, FitWindow window = {});

}  // namespace genfunc
