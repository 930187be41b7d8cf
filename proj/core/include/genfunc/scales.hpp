#pragma once

#include <optional>
#include <string>
#include <vector>

namespace genfunc {

/// A growth sequence N : IN -> IR_+, the object the regularity classes are
/// indexed by. Parametric kinds evaluate anywhere; tabulated ones are
/// restricted to their table.
struct ScaleSequence {
    enum class Kind { constant, affine, log_affine, tabulated };

    Kind kind = Kind::constant;
    double a = 0.0;  // slope (affine / log-affine)
    double b = 0.0;  // intercept / constant value
    std::vector<double> table;

    static ScaleSequence constant(double b);
    static ScaleSequence affine(double a, double b);
    static ScaleSequence log_affine(double a, double b);
    static ScaleSequence tabulated(std::vector<double> values);

    /// N(n). Throws Error("evaluation-out-of-range") past a table's end and
    /// PreconditionError if any value would be negative.
    double eval(int n) const;
    /// Largest index evaluable (INT_MAX for parametric kinds).
    int max_index() const;
    std::string describe() const;
};

/// true iff N1(n) <= N2(n) for all 0 <= n <= n_max.
bool leq(const ScaleSequence& n1, const ScaleSequence& n2, int n_max);

/// The built-in scale families. `bounded`..`full` are the regular ones;
/// `log_plain` is the known non-regular family kept as the negative fixture
/// for the axiom checker.
enum class FamilyName {
    bounded,    // B: bounded sequences
    affine,     // A: a*n + b
    r1,         // N(n) <= n + b
    ra,         // slow growth: N(n) <= a'*n + b with a' < a
    log1,       // a*ln(n) + b
    log_plain,  // ln(n) + b  (not regular)
    full,       // everything
};

std::string family_name_str(FamilyName name);
std::optional<FamilyName> family_name_parse(const std::string& s);

/// Bounds of the finite witness search: slopes and intercepts are swept on
/// uniform grids, sequences evaluated on 0..n_max.
struct SearchBounds {
    int n_max = 50;
    int k_max = 5;
    double b_max = 20.0;
    double a_max = 5.0;
    double grid_step = 0.25;
};

class RegularScaleFamily {
public:
    /// Builds the named family with its default generator set. `a` is the
    /// Ra slope bound (ignored elsewhere).
    explicit RegularScaleFamily(FamilyName name, double a = 1.0);

    FamilyName name() const { return name_; }
    double param_a() const { return a_; }
    const std::vector<ScaleSequence>& generators() const { return generators_; }
    void set_generators(std::vector<ScaleSequence> gens);

    /// Candidate witnesses in lexicographic parameter order.
    std::vector<ScaleSequence> candidates(const SearchBounds& bounds) const;

    std::string describe() const;

private:
    FamilyName name_;
    double a_;
    std::vector<ScaleSequence> generators_;
};

/// One tested instance of an axiom: which generators / shifts were involved
/// and, when a witness exists, the first one in parameter order.
struct AxiomInstance {
    int gen1 = 0;
    int gen2 = -1;       // second generator (max / superadditive)
    int k = -1, kp = -1; // translation shifts
    bool ok = false;
    std::optional<ScaleSequence> witness;
    // For failures: the pair maximizing the violation under the best
    // candidate, with both sides of the violated inequality.
    int fail_l1 = -1, fail_l2 = -1;
    double fail_lhs = 0.0, fail_rhs = 0.0;
    std::optional<ScaleSequence> best_candidate;
};

enum class AxiomKind { translation, max, superadditive };

struct AxiomReport {
    AxiomKind axiom = AxiomKind::translation;
    FamilyName family = FamilyName::bounded;
    bool passed = false;
    SearchBounds bounds;
    std::vector<AxiomInstance> instances;

    const AxiomInstance* first_failure() const;
};

/// Def.-style overstability by translation: for every generator N and every
/// (k, k') <= k_max there must be a family member N' with
/// N(n + k) + k' <= N'(n) on 0..n_max.
AxiomReport check_overstability(const RegularScaleFamily& family, int n_max,
                                int k_max,
                                const SearchBounds& bounds = SearchBounds{});

/// Overstability by maximum: every generator pair is dominated by a member.
AxiomReport check_max_stability(const RegularScaleFamily& family, int n_max,
                                const SearchBounds& bounds = SearchBounds{});

/// Superadditive closure: for generators (N1, N2) there is a member N with
/// N1(l1) + N2(l2) <= N(l1 + l2) whenever l1 + l2 <= n_max.
AxiomReport check_superadditive_closure(
    const RegularScaleFamily& family, int n_max, double b_max,
    const SearchBounds& bounds = SearchBounds{});

/// Re-evaluates a failed instance's inequality; true when the stored
/// violation is reproduced exactly.
bool reproduce_violation(const AxiomReport& report, const AxiomInstance& inst,
                         const RegularScaleFamily& family);

/// --- classification of fitted exponent profiles ---------------------------

struct FamilyFit {
    double slope = 0.0;      // least-squares affine fit of N-hat(l)
    double intercept = 0.0;
    double b_hat = 0.0;      // max_l (N-hat(l) - canonical slope * l)
};

struct ClassifyResult {
    FamilyName family = FamilyName::full;
    double a = 0.0;          // Ra parameter when family == ra
    FamilyFit fit;
    bool negligible = false; // profile was below the numerical floor
};

struct ClassifyOptions {
    double tol = 0.25;
    double b_max = 3.0;
    std::vector<double> a_grid;      // ascending; default 0.25..5 step 0.25
    double residual_max = 0.5;

    ClassifyOptions();
};

/// Finite-range membership of a fitted one-index profile:
///   B     max_n (N(n) - N(0)) <= tol
///   R1    max_n (N(n) - n) <= b_max and max forward step <= 1 + tol
///   Ra(a) some grid slope a' < a dominates with intercept <= b_max and
///         max forward step <= a' + tol
///   Full  always
bool profile_in_family(const std::vector<double>& exponents, FamilyName name,
                       double a, const ClassifyOptions& opt);

/// Smallest family in the order B < R1 < Ra(grid, ascending) < Full whose
/// membership predicate accepts the profile. Throws UnclassifiableError when
/// residuals exceed opt.residual_max.
ClassifyResult classify_profile(const std::vector<double>& exponents,
                                const std::vector<double>& residuals,
                                const ClassifyOptions& opt);

/// Order index used for "smallest family" comparisons (B=0, R1=1, ...).
int family_order(FamilyName name, double a, const ClassifyOptions& opt);

/// --- two-index families ----------------------------------------------------

/// Lifts of a one-index family to IN^2 profiles: R_u = {1} (x) R depends only
/// on the derivative index, R_partial = R (x) {1} only on the weight index.
struct TwoIndexScaleFamily {
    enum class Lift { u_lift, d_lift, full, bounded };

    FamilyName base = FamilyName::full;
    double base_a = 1.0;
    Lift lift = Lift::full;

    /// profile(q, l) given as row-major (Q+1) x (L+1) exponents.
    bool contains(const std::vector<double>& profile, int Q, int L,
                  const ClassifyOptions& opt) const;
};

/// max_q |N(q,l) - N(0,l)| over the table (u-signature defect).
double q_variation(const std::vector<double>& profile, int Q, int L);
/// max_l |N(q,l) - N(q,0)| over the table (partial-signature defect).
double l_variation(const std::vector<double>& profile, int Q, int L);

}  // namespace genfunc
