#include "cmf/hmodule.hpp"

#include <cmath>
#include <string>

namespace cmf {

namespace {

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace

ModuleSpace::ModuleSpace(BlockSpec algebra, int rows, int cols,
                         std::vector<Eigen::MatrixXcd> basis)
    : algebra_(std::move(algebra)), rows_(rows), cols_(cols), basis_(std::move(basis)) {
    if (rows_ < 1 || cols_ < 1) {
        throw Error("ModuleSpace: rows and cols must be positive");
    }
    if (algebra_.total_dim() != rows_) {
        throw Error("ModuleSpace: algebra embedding dimension must equal rows");
    }
    if (basis_.empty()) {
        throw Error("ModuleSpace: basis must be nonempty");
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (basis_[i].rows() != rows_ || basis_[i].cols() != cols_) {
            throw Error("ModuleSpace: basis element " + std::to_string(i) + " has wrong shape");
        }
    }
    basis_cols_.resize(static_cast<Eigen::Index>(rows_) * cols_,
                       static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        basis_cols_.col(static_cast<Eigen::Index>(i)) = vec(basis_[i]);
    }
    solver_.compute(basis_cols_);
}

Eigen::MatrixXcd ModuleSpace::ambient(const Eigen::VectorXcd& coords) const {
    if (coords.size() != dim()) {
        throw Error("ModuleSpace::ambient: coordinate length does not match dimension");
    }
    Eigen::VectorXcd v = basis_cols_ * coords;
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), rows_, cols_);
}

Eigen::VectorXcd ModuleSpace::coords(const Eigen::MatrixXcd& m, double tol) const {
    if (m.rows() != rows_ || m.cols() != cols_) {
        throw Error("ModuleSpace::coords: matrix shape does not match space");
    }
    Eigen::VectorXcd rhs = vec(m);
    Eigen::VectorXcd x = solver_.solve(rhs);
    const double residual = (basis_cols_ * x - rhs).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (residual > tol * scale) {
        throw NotInSpan("coords: reconstruction residual " + std::to_string(residual) +
                        " exceeds tolerance");
    }
    return x;
}

ModuleElement::ModuleElement(SpacePtr space, Eigen::VectorXcd coords)
    : space_(std::move(space)), coords_(std::move(coords)) {
    if (!space_) {
        throw Error("ModuleElement: null space");
    }
    if (coords_.size() != space_->dim()) {
        throw Error("ModuleElement: coordinate length does not match space dimension");
    }
}

ModuleElement ModuleElement::zero(SpacePtr space) {
    const int m = space->dim();
    return ModuleElement(std::move(space), Eigen::VectorXcd::Zero(m));
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& rhs) {
    require_same_space(space_, rhs.space_, "add");
    coords_ += rhs.coords_;
    return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& rhs) {
    require_same_space(space_, rhs.space_, "subtract");
    coords_ -= rhs.coords_;
    return *this;
}

ModuleElement& ModuleElement::operator*=(cdouble scalar) {
    coords_ *= scalar;
    return *this;
}

ModuleElement operator+(ModuleElement lhs, const ModuleElement& rhs) {
    lhs += rhs;
    return lhs;
}

ModuleElement operator-(ModuleElement lhs, const ModuleElement& rhs) {
    lhs -= rhs;
    return lhs;
}

ModuleElement operator*(ModuleElement f, cdouble scalar) {
    f *= scalar;
    return f;
}

ModuleElement operator*(cdouble scalar, ModuleElement f) {
    f *= scalar;
    return f;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* op) {
    if (a.get() != b.get()) {
        throw SpaceMismatch(std::string(op) + ": elements live in different spaces");
    }
}

ValidationReport validate(const ModuleSpace& space, double tol) {
    ValidationReport report;
    const int m = space.dim();
    const BlockSpec& spec = space.algebra();

    // Basis independence.
    {
        Eigen::MatrixXcd cols(static_cast<Eigen::Index>(space.rows()) * space.cols(), m);
        for (int i = 0; i < m; ++i) {
            const auto& e = space.basis(i);
            cols.col(i) = Eigen::Map<const Eigen::VectorXcd>(e.data(), e.size());
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cols);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin <= tol * std::max(1.0, smax)) {
            report.issues.push_back({ValidationIssue::Kind::DependentBasis,
                                     "basis is not linearly independent (smallest singular value " +
                                         std::to_string(smin) + ")"});
        }
    }

    // Inner products must land in the block pattern.
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const Eigen::MatrixXcd p = space.basis(i) * space.basis(j).adjoint();
            const double leak = off_pattern_magnitude(spec, p);
            if (leak > tol) {
                report.issues.push_back(
                    {ValidationIssue::Kind::PatternViolation,
                     "inner product of basis pair (" + std::to_string(i) + "," +
                         std::to_string(j) + ") leaves the block pattern (magnitude " +
                         std::to_string(leak) + ")"});
            }
        }
    }

    // Invariance of the span under the algebra action, tested on matrix units.
    {
        Eigen::MatrixXcd cols(static_cast<Eigen::Index>(space.rows()) * space.cols(), m);
        for (int i = 0; i < m; ++i) {
            const auto& e = space.basis(i);
            cols.col(i) = Eigen::Map<const Eigen::VectorXcd>(e.data(), e.size());
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> lsq(cols);
        for (int k = 0; k < spec.block_count(); ++k) {
            const int off = spec.block_offset(k);
            const int n = spec.block_size(k);
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    for (int i = 0; i < m; ++i) {
                        Eigen::MatrixXcd prod =
                            Eigen::MatrixXcd::Zero(space.rows(), space.cols());
                        prod.row(off + r) = space.basis(i).row(off + c);
                        Eigen::VectorXcd rhs =
                            Eigen::Map<const Eigen::VectorXcd>(prod.data(), prod.size());
                        Eigen::VectorXcd x = lsq.solve(rhs);
                        const double residual = (cols * x - rhs).cwiseAbs().maxCoeff();
                        if (residual > tol * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
                            report.issues.push_back(
                                {ValidationIssue::Kind::NotInvariant,
                                 "span not invariant: unit (block " + std::to_string(k) + ", " +
                                     std::to_string(r) + "," + std::to_string(c) +
                                     ") times basis " + std::to_string(i) + " leaves span"});
                        }
                    }
                }
            }
        }
    }

    // Positivity of the basis Gramians.
    for (int i = 0; i < m; ++i) {
        const Eigen::MatrixXcd p = space.basis(i) * space.basis(i).adjoint();
        const AlgebraElement g = from_embedded(spec, p);
        if (!is_positive(g, tol)) {
            report.issues.push_back({ValidationIssue::Kind::NotPositive,
                                     "inner product of basis element " + std::to_string(i) +
                                         " with itself is not positive"});
        }
    }

    return report;
}

AlgebraElement inner(const ModuleElement& f, const ModuleElement& g) {
    require_same_space(f.space(), g.space(), "inner");
    const Eigen::MatrixXcd p = f.ambient() * g.ambient().adjoint();
    return from_embedded(f.space()->algebra(), p);
}

ModuleElement act(const AlgebraElement& a, const ModuleElement& f, double tol) {
    if (a.spec() != f.space()->algebra()) {
        throw SpecMismatch("act: algebra element does not match the module's algebra");
    }
    const Eigen::MatrixXcd prod = a.embedded() * f.ambient();
    return ModuleElement(f.space(), f.space()->coords(prod, tol));
}

double norm(const ModuleElement& f) {
    return std::sqrt(norm(inner(f, f)));
}

ModuleOperator::ModuleOperator(SpacePtr space, Eigen::MatrixXcd matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (!space_) {
        throw Error("ModuleOperator: null space");
    }
    if (matrix_.rows() != space_->dim() || matrix_.cols() != space_->dim()) {
        throw Error("ModuleOperator: matrix shape does not match space dimension");
    }
}

ModuleOperator ModuleOperator::identity(SpacePtr space) {
    const int m = space->dim();
    return ModuleOperator(std::move(space), Eigen::MatrixXcd::Identity(m, m));
}

ModuleElement ModuleOperator::apply(const ModuleElement& f) const {
    require_same_space(space_, f.space(), "apply");
    return ModuleElement(space_, matrix_ * f.coords());
}

ModuleOperator ModuleOperator::compose(const ModuleOperator& rhs) const {
    require_same_space(space_, rhs.space_, "compose");
    return ModuleOperator(space_, matrix_ * rhs.matrix_);
}

ModuleOperator ModuleOperator::inverse(double tol) const {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix_,
                                           Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.minCoeff() <= tol) {
        throw Singular("ModuleOperator::inverse: smallest singular value " +
                       std::to_string(sv.minCoeff()) + " <= tolerance");
    }
    return ModuleOperator(space_, svd.matrixV() * sv.cwiseInverse().asDiagonal() *
                                      svd.matrixU().adjoint());
}

double ModuleOperator::identity_defect() const {
    const Eigen::MatrixXcd d =
        matrix_ - Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace cmf
