#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "genfunc/bump.hpp"
#include "genfunc/fourier.hpp"
#include "genfunc/grid.hpp"
#include "genfunc/scales.hpp"

namespace genfunc {

/// An open frequency cone. d=1: a half line (sign); d=2: the angular sector
/// [theta1, theta2) in radians. Nodes closer to 0 than the exclusion radius
/// are ignored (the DC region carries no directional information).
struct Cone {
    int dim = 1;
    int sign = +1;          // d=1
    double theta1 = 0.0;    // d=2
    double theta2 = 0.0;
    double inner_exclusion = 0.0;

    static Cone half_line(int sign, double exclusion);
    static Cone sector(double theta1, double theta2, double exclusion);
    bool contains(double xi0, double xi1) const;
    std::string describe() const;
};

/// Partition of the plane into `count` equal sectors starting at
/// -pi/count (so sector 0 is centered on the +xi1 axis).
std::vector<Cone> sector_cones(int count, double exclusion);

/// The family of space cutoffs used by the microlocal tests: bumps at the
/// given centers with a geometric radius ladder r0, r0/2, r0/4.
struct CutoffFamily {
    double r0 = 0.5;
    int levels = 3;

    std::vector<double> radii() const;
};

/// q -> fitted exponent of sup over cone nodes of (1+|xi|)^q |u-hat_eps|.
/// Throws "cone-too-thin" when fewer than 32 nodes lie beyond the exclusion.
GrowthProfile cone_profile(const EpsilonNet& freq_net, const Cone& cone, int Q,
                           FitWindow window = {}, double floor = 1e-13);

/// Family used for micro-regularity decisions.
struct FamilyChoice {
    FamilyName name = FamilyName::bounded;
    double a = 1.0;  // Ra parameter
};

/// Is the cone profile inside the family? Below-floor profiles count as
/// regular (nothing left to be singular).
bool rough_in_family(const GrowthProfile& profile, const FamilyChoice& family,
                     const ClassifyOptions& opt);

/// One (center, cone, radius) decision of the wavefront lattice.
struct MicrolocalEntry {
    std::array<double, 2> center{0.0, 0.0};
    std::size_t cone_index = 0;
    double radius = 0.0;
    GrowthProfile profile;
    bool in_family = false;
};

/// Def.-style microregularity: true iff some cutoff radius at x0 makes the
/// cone profile of ft(phi u) land in the family. Evaluates the whole radius
/// ladder (the spec's existential over phi).
bool microregular(const EpsilonNet& u, std::array<double, 2> x0,
                  const Cone& cone, const FamilyChoice& family,
                  const CutoffFamily& cutoffs, int Q,
                  const ClassifyOptions& opt, unsigned jobs = 1,
                  std::vector<MicrolocalEntry>* entries = nullptr);

struct WavefrontReport {
    FamilyChoice family;
    std::vector<Cone> cones;
    std::vector<std::array<double, 2>> centers;
    CutoffFamily cutoffs;
    std::vector<MicrolocalEntry> entries;
    /// (center index, cone index) pairs not in the family at the smallest
    /// radius.
    std::vector<std::pair<std::size_t, std::size_t>> wavefront;
    /// Space-side local classification: flagged center indices.
    std::vector<std::size_t> singsupp_estimate;
    /// Centers actually cone-tested (pre-screened unless full_scan).
    std::vector<std::size_t> tested_centers;
};

struct WavefrontOptions {
    int Q = 4;
    int L = 2;              // space-side local classification depth
    bool full_scan = false; // cone-test every center, not just flagged ones
    ClassifyOptions classify;
};

/// Builds the full (center x cone x radius) decision lattice plus the
/// independent space-side singular-support estimate.
WavefrontReport wavefront(const EpsilonNet& u, const FamilyChoice& family,
                          const std::vector<std::array<double, 2>>& centers,
                          const std::vector<Cone>& cones,
                          const CutoffFamily& cutoffs,
                          const WavefrontOptions& opt = {}, unsigned jobs = 1);

/// Projection property: wavefront centers equal the singular-support
/// estimate up to a halo of one center-lattice step.
bool check_projection(const WavefrontReport& report, double halo);

/// Regular directions survive multiplication by a test function: every cone
/// in-family for u stays in-family for phi u.
bool check_cutoff_monotonicity(const EpsilonNet& u, std::array<double, 2> x0,
                               double radius, const std::vector<Cone>& cones,
                               const FamilyChoice& family, int Q,
                               const ClassifyOptions& opt, unsigned jobs = 1);

/// phi * u frames for a tensor bump cutoff at x0 (shared helper).
EpsilonNet apply_bump_cutoff(const EpsilonNet& u, std::array<double, 2> x0,
                             double radius);

}  // namespace genfunc
