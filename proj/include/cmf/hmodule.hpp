#ifndef CMF_HMODULE_HPP
#define CMF_HMODULE_HPP

#include <memory>
#include <string>
#include <vector>

#include "cmf/algebra.hpp"

namespace cmf {

struct ValidationIssue {
    enum class Kind {
        Shape,
        DependentBasis,
        PatternViolation,
        NotInvariant,
        NotPositive,
    };
    Kind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

/// Thrown when a descriptor's module space fails validation on load.
class ValidationFailure : public Error {
public:
    explicit ValidationFailure(ValidationReport report)
        : Error(report.issues.empty() ? "module space invalid"
                                      : report.issues.front().detail),
          report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Subspace of p x q complex matrices carrying the algebra-valued inner
/// product (M, N) -> M N^*, where the algebra embeds block-diagonally in
/// the p x p matrices. Elements are stored as coordinates over a fixed
/// basis of the subspace.
class ModuleSpace {
public:
    ModuleSpace(BlockSpec algebra, int rows, int cols, std::vector<Eigen::MatrixXcd> basis);

    const BlockSpec& algebra() const { return algebra_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    /// Complex dimension m of the subspace.
    int dim() const { return static_cast<int>(basis_.size()); }
    const Eigen::MatrixXcd& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
    const std::vector<Eigen::MatrixXcd>& basis() const { return basis_; }

    /// Ambient p x q matrix of the element with the given coordinates.
    Eigen::MatrixXcd ambient(const Eigen::VectorXcd& coords) const;

    /// Least-squares coordinates of an ambient matrix; throws NotInSpan when
    /// the reconstruction residual exceeds tol (relative to max(1, |entry|)).
    Eigen::VectorXcd coords(const Eigen::MatrixXcd& ambient, double tol = kDefaultTol) const;

private:
    BlockSpec algebra_;
    int rows_;
    int cols_;
    std::vector<Eigen::MatrixXcd> basis_;
    Eigen::MatrixXcd basis_cols_;  // vec(basis_i) stacked as columns, (p*q) x m
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> solver_;
};

using SpacePtr = std::shared_ptr<const ModuleSpace>;

/// Element of a module space, held as coordinates over the space basis.
class ModuleElement {
public:
    ModuleElement(SpacePtr space, Eigen::VectorXcd coords);

    static ModuleElement zero(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const Eigen::VectorXcd& coords() const { return coords_; }
    Eigen::MatrixXcd ambient() const { return space_->ambient(coords_); }

    ModuleElement& operator+=(const ModuleElement& rhs);
    ModuleElement& operator-=(const ModuleElement& rhs);
    ModuleElement& operator*=(cdouble scalar);

private:
    SpacePtr space_;
    Eigen::VectorXcd coords_;
};

ModuleElement operator+(ModuleElement lhs, const ModuleElement& rhs);
ModuleElement operator-(ModuleElement lhs, const ModuleElement& rhs);
ModuleElement operator*(ModuleElement f, cdouble scalar);
ModuleElement operator*(cdouble scalar, ModuleElement f);

/// Checks basis independence, invariance of the span under the algebra
/// action, inner products landing in the block pattern, and positivity of
/// the basis Gramians. Returns one issue per failed check instead of
/// throwing.
ValidationReport validate(const ModuleSpace& space, double tol = kDefaultTol);

/// Algebra-valued inner product M N^*, projected to block representation.
AlgebraElement inner(const ModuleElement& f, const ModuleElement& g);

/// Left action a . f, re-expressed in basis coordinates.
ModuleElement act(const AlgebraElement& a, const ModuleElement& f, double tol = kDefaultTol);

/// Module norm ||<f,f>||^(1/2).
double norm(const ModuleElement& f);

/// Linear operator on a module space in basis coordinates.
class ModuleOperator {
public:
    ModuleOperator(SpacePtr space, Eigen::MatrixXcd matrix);

    static ModuleOperator identity(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    ModuleElement apply(const ModuleElement& f) const;
    /// Composition this after rhs.
    ModuleOperator compose(const ModuleOperator& rhs) const;
    /// Throws Singular when the smallest singular value is <= tol.
    ModuleOperator inverse(double tol = kDefaultTol) const;
    /// Max-entry norm of matrix() - identity.
    double identity_defect() const;

private:
    SpacePtr space_;
    Eigen::MatrixXcd matrix_;
};

/// Throws SpaceMismatch unless both arguments reference the same space object.
void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* op);

}  // namespace cmf

#endif  // CMF_HMODULE_HPP
