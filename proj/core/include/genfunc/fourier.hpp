#pragma once

#include <string>
#include <vector>

#include "genfunc/grid.hpp"
#include "genfunc/scales.hpp"

namespace genfunc {

/// Frequency-side view of a space box: nodes xi_m = -pi/h + m * dxi,
/// dxi = 2*pi / (box width); same node count, symmetric about 0.
struct FrequencyGrid {
    Box xi_box;
    double dxi = 0.0;
    double nyquist = 0.0;
};

FrequencyGrid frequency_grid(const Box& space_box);

/// Continuum-scaled discrete Fourier transform of one frame:
/// u-hat(xi) = integral e^{-i x xi} u(x) dx, realized as h^d * DFT with the
/// phase factor for the box offset, output reordered to ascending xi.
GridFunction ft_frame(const GridFunction& g);
/// Inverse with the (2 pi)^{-d} normalization; exact inverse of ft_frame.
GridFunction ift_frame(const GridFunction& g);

/// Per-frame transform of a net (space -> frequency). Requires space-side
/// frames to decay at the boundary; the output's trusted prefix is the run
/// of frames whose spectrum decays at the frequency-window edge (content
/// inside Nyquist).
EpsilonNet ft_net(const EpsilonNet& net, unsigned jobs = 1);
/// frequency -> space inverse.
EpsilonNet ift_net(const EpsilonNet& net, unsigned jobs = 1);

/// Discrete Parseval defect |h^d sum|u|^2 - (2pi)^-d dxi^d sum|u-hat|^2|
/// relative to the energy; guards the continuum normalization.
double plancherel_defect(const GridFunction& space_frame,
                         const GridFunction& freq_frame);

/// --- Fourier-side checks ----------------------------------------------------

struct LemmaBoundRow {
    int q = 0, l = 0;
    std::vector<double> ratios;  // mu_{q,l}(u-hat) / mu_{l+d+1,q}(u) per eps
    double envelope = 0.0;       // max ratio / min ratio
    bool pass = false;
};

struct LemmaBoundReport {
    std::vector<LemmaBoundRow> rows;
    std::size_t ladder_lo = 0, ladder_hi = 0;
    double envelope_cap = 10.0;
    bool pass = false;
};

/// Fundamental seminorm inequality mu_{q,l}(u-hat) <= C mu_{l+d+1,q}(u):
/// the ratio must stay inside a fixed envelope across the ladder. Evaluated
/// on the prefix where both sides are grid-faithful (>= 2 rungs).
LemmaBoundReport check_lemma_bound(const EpsilonNet& net, int Q, int L,
                                   DerivScheme scheme = DerivScheme::fd4,
                                   double envelope_cap = 10.0,
                                   unsigned jobs = 1);

enum class TwoIndexSignature { r_u, r_partial, both, neither };
std::string signature_str(TwoIndexSignature s);

struct ExchangeReport {
    TwoIndexSignature input = TwoIndexSignature::neither;
    TwoIndexSignature output = TwoIndexSignature::neither;
    double input_q_variation = 0.0;   // uniformity defect of the input
    double output_l_variation = 0.0;  // uniformity defect of the output
    bool pass = false;
    GrowthProfile input_profile;
    GrowthProfile output_profile;
};

/// Measures the two-index signatures of a net and of its Fourier transform;
/// passes when they swap (u <-> partial).
ExchangeReport check_exchange(const EpsilonNet& net, int Q, int L,
                              double tol = 0.25, unsigned jobs = 1);

/// Rough profile q -> fitted exponent of mu_{q,0} (zero derivative order)
/// of a frequency-side net.
GrowthProfile rough_profile(const EpsilonNet& freq_net, int Q,
                            FitWindow window = {}, double floor = 1e-13,
                            unsigned jobs = 1);

struct GlobalReport {
    ClassifyResult space_side;
    ClassifyResult fourier_side;
    bool agree = false;
    GrowthProfile space_profile;   // p_{K,l} exponents
    GrowthProfile fourier_profile; // rough mu_{q,0} exponents of ft(kappa u)
};

/// Global regularity characterization for compactly supported nets: the
/// space-side classification of p_{K,l} growth must agree with the
/// classification of the rough Fourier-side profile of kappa * u.
GlobalReport classify_global(const EpsilonNet& u, const EpsilonNet& cut,
                             const Box& K, int Q, int L,
                             const ClassifyOptions& opt, unsigned jobs = 1);

/// Regularity theorem at net level: a net with a flat two-index profile
/// must keep a flat profile under the transform. Throws
/// "precondition-violated" when the input profile is not flat within tol.
bool check_regularity_theorem(const EpsilonNet& net, int Q, int L,
                              double tol = 0.25, unsigned jobs = 1);

}  // namespace genfunc
