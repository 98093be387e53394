#ifndef CMF_EXACTNESS_HPP
#define CMF_EXACTNESS_HPP

#include <optional>
#include <vector>

#include "cmf/frame.hpp"

namespace cmf {

enum class RemovalVerdict {
    NotFrame,           // restriction to the complement is not a frame
    FrameWithBound,     // restriction stays a frame, with a guaranteed lower bound
    MeasureZeroTrivial, // removed point carries no mass; restriction unchanged
};

struct RemovalReport {
    double omega0 = 0.0;
    double mass = 0.0;
    AlgebraElement psi_at_omega0;
    bool criterion_invertible = false;
    RemovalVerdict verdict = RemovalVerdict::MeasureZeroTrivial;
    /// Norm of the inverse of 1_A - psi(omega0) mass, when it exists.
    std::optional<double> a_norm;
    std::optional<double> k;
    /// A / (1 + k mass), with A the tight lower bound of the full frame.
    std::optional<double> guaranteed_lower_bound;
    /// Lower bound from an explicitly supplied dual, when one was given.
    std::optional<double> general_dual_bound;
};

/// The coefficient map w -> <F(omega0), S^{-1} F(w)> as an algebra-valued
/// polynomial aligned with F's measure.
AlgebraPoly psi_map(const FrameMap& f, double omega0, double tol = kDefaultTol);

/// Residual of the identity psi(omega0) = integral over the domain minus
/// {omega0} of psi psi^* plus psi(omega0)^2 mass(omega0).
double psi_identity_defect(const FrameMap& f, double omega0, double tol = kDefaultTol);

/// Removal dichotomy at a single point. When `explicit_dual` is supplied and
/// (F, dual) is a dual pair, the report also carries the general-dual bound.
RemovalReport removal_check_atom(const FrameMap& f, double omega0, double tol = kDefaultTol,
                                 const FrameMap* explicit_dual = nullptr);

/// Subset of the domain: atom indices plus subintervals of the measure's
/// intervals. Atoms whose points land inside a chosen subinterval belong to
/// the subset automatically.
struct SubsetSelection {
    std::vector<std::size_t> atom_indices;
    std::vector<Interval> subintervals;
};

struct SubsetRemovalReport {
    ModuleElement subset_integral;  // f = integral of F over the subset
    ModuleElement witness;          // S^{-1} f, annihilates F off the subset
    double subset_mass = 0.0;
    /// Largest coefficient or atom-value norm of <witness, F(w)> outside the
    /// subset; at most tol when the hypothesis holds.
    double max_off_subset_norm = 0.0;
    bool witness_verified = false;
};

/// Checks the characteristic-function hypothesis <f, S^{-1}F(w)> = 1 on the
/// subset and 0 elsewhere; when it holds the restriction to the complement is
/// not a frame and the witness exhibits the lost direction. Throws
/// HypothesisFails (with the first violating location) or ZeroVector.
SubsetRemovalReport subset_removal_check(const FrameMap& f, const SubsetSelection& subset,
                                         double tol = kDefaultTol);

struct RieszReport {
    bool applicable = false;  // only purely atomic measures are decidable here
    int rank = 0;
    int target_dim = 0;
    bool is_riesz_type = false;
    std::vector<std::size_t> zero_atoms;
};

/// Surjectivity test of the analysis operator for purely atomic measures:
/// Riesz-type iff the scalarized analysis matrix has full target rank.
RieszReport riesz_type_check(const FrameMap& f, double tol = kDefaultTol);

struct SecondDualReport {
    RemovalReport removal;
    FrameMap second_dual;
    double duality_defect = 0.0;
    /// Distance of the constructed dual from the canonical dual at omega0.
    double discrepancy_at_omega0 = 0.0;
};

/// When removal at omega0 keeps F a frame, builds a dual of F that vanishes
/// at omega0 (canonical dual of the restriction, extended by zero), which
/// differs from S^{-1}F and so witnesses that F is not Riesz-type.
SecondDualReport non_riesz_via_removal(const FrameMap& f, double omega0,
                                       double tol = kDefaultTol);

struct ExactnessScan {
    std::vector<RemovalReport> per_atom;
    bool exact_on_atoms = false;
};

/// Runs removal_check_atom at every atom of a purely atomic measure.
/// Throws NotApplicable otherwise.
ExactnessScan exactness_scan(const FrameMap& f, double tol = kDefaultTol);

/// Residual of the minimal-coefficient decomposition: for phi with
/// synthesis(F, phi) = f, the L2 norm form of phi splits into the canonical
/// coefficient part plus the deviation part. Throws NotACoefficient when phi
/// does not synthesize f at tol.
double minimal_coefficient_defect(const FrameMap& f, const ModuleElement& elem,
                                  const AlgebraPoly& phi, double tol = kDefaultTol);

}  // namespace cmf

#endif  // CMF_EXACTNESS_HPP
