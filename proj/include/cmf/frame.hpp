#ifndef CMF_FRAME_HPP
#define CMF_FRAME_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cmf/hmodule.hpp"
#include "cmf/measure.hpp"

namespace cmf {

/// Piecewise-polynomial module-valued map on a measure space: one coordinate
/// coefficient list per interval (ascending powers of w) and one coordinate
/// vector per atom.
class FrameMap {
public:
    FrameMap(SpacePtr space, MeasurePtr measure,
             std::vector<std::vector<Eigen::VectorXcd>> interval_coeffs,
             std::vector<Eigen::VectorXcd> atom_values);

    const SpacePtr& space() const { return space_; }
    const MeasurePtr& measure() const { return measure_; }
    std::size_t interval_count() const { return interval_coeffs_.size(); }
    std::size_t atom_count() const { return atom_values_.size(); }
    const std::vector<Eigen::VectorXcd>& interval_coeffs(std::size_t i) const {
        return interval_coeffs_[i];
    }
    const Eigen::VectorXcd& atom_value(std::size_t k) const { return atom_values_[k]; }
    int degree() const;

    /// New map with every coefficient and atom value transformed by the
    /// operator matrix.
    FrameMap transformed(const Eigen::MatrixXcd& op) const;

private:
    SpacePtr space_;
    MeasurePtr measure_;
    std::vector<std::vector<Eigen::VectorXcd>> interval_coeffs_;
    std::vector<Eigen::VectorXcd> atom_values_;
};

/// Value of the map at w. An atom returns its stored value, even when the
/// point also lies inside an interval. Throws OutOfDomain.
ModuleElement evaluate(const FrameMap& f, double w);

/// w -> <f, F(w)>, one algebra coefficient per power plus atom values.
AlgebraPoly analysis(const FrameMap& frame, const ModuleElement& f);

/// Integral of w -> phi(w) . F(w) by exact moments.
ModuleElement synthesis(const FrameMap& frame, const AlgebraPoly& phi,
                        double tol = kDefaultTol);

/// Matrix of f -> integral of <f, G(w)> F(w); the frame operator when G = F.
ModuleOperator mixed_frame_operator(const FrameMap& f, const FrameMap& g,
                                    double tol = kDefaultTol);

/// Frame operator S: f -> integral of <f, F(w)> F(w), by exact moments.
ModuleOperator frame_operator(const FrameMap& f, double tol = kDefaultTol);

enum class BoundsStrategy {
    CommutativeExact,   // per-block generalized eigenvalues, exact
    DirectionSampled,   // scalarized along sampled unit directions, estimate
};

struct BoundsOptions {
    /// Default: exact when every block has size 1, sampled otherwise.
    std::optional<BoundsStrategy> strategy;
    int directions = 512;
    std::uint64_t seed = 12345;
    double tol = kDefaultTol;
};

struct BlockBound {
    int block = 0;
    double lower = 0.0;
    double upper = 0.0;
    /// Rank of the block Gramian (exact strategy only; -1 when sampled).
    int rank = -1;
};

struct BoundsReport {
    double lower = 0.0;
    double upper = 0.0;
    BoundsStrategy strategy = BoundsStrategy::CommutativeExact;
    int directions_used = 0;
    double tolerance = kDefaultTol;
    std::vector<BlockBound> blocks;
    bool is_frame() const { return lower > tolerance; }
    bool tight() const { return upper - lower <= tolerance * std::max(1.0, upper); }
};

/// Extremes of the Hermitian pencil (form, gram) restricted to the range of
/// gram. Kernel directions of gram must annihilate form, otherwise the ratio
/// form/gram is unbounded and KernelViolation is thrown. `vacuous` marks an
/// all-zero pencil that contributes no constraint.
struct PencilBounds {
    double lower = 0.0;
    double upper = 0.0;
    int rank = 0;
    bool vacuous = false;
};
PencilBounds hermitian_pencil_bounds(const Eigen::MatrixXcd& gram, const Eigen::MatrixXcd& form,
                                     double rank_tol = 1e-12, double kernel_tol = 1e-9);

/// Tight frame bounds (commutative algebras) or direction-sampled estimates.
/// Reports lower = 0 for maps that are Bessel only; never throws NotAFrame.
BoundsReport frame_bounds(const FrameMap& f, const BoundsOptions& opts = {});

/// frame_bounds, then throws NotAFrame unless lower > tol.
BoundsReport require_frame_bounds(const FrameMap& f, const BoundsOptions& opts = {});

/// S^{-1} F, applied coefficientwise. Throws Singular when S is not invertible.
FrameMap canonical_dual(const FrameMap& f, double tol = kDefaultTol);

struct DualityReport {
    double defect = 0.0;
    bool is_dual = false;
    double tolerance = kDefaultTol;
};

/// Max-entry distance of the operator f -> integral of <f, G(w)> F(w) from
/// the identity.
DualityReport duality_defect(const FrameMap& f, const FrameMap& g, double tol = kDefaultTol);

struct DualLowerBoundReport {
    double upper_bound_g = 0.0;   // Bessel bound of G
    double implied_lower = 0.0;   // 1 / upper_bound_g
    int samples = 0;
    double max_violation = 0.0;
    bool passed = false;
};

/// For a dual pair (F, G): checks that (1/B_G) ||<f,f>|| is below the norm of
/// the frame-operator form of F on sampled elements f. Throws NotDual when
/// the pair fails the duality identity at tol.
DualLowerBoundReport dual_pair_lower_bound_check(const FrameMap& f, const FrameMap& g,
                                                 int samples, double tol = kDefaultTol,
                                                 std::uint64_t seed = 12345);

}  // namespace cmf

#endif  // CMF_FRAME_HPP
