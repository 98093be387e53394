#include "cmf/algebra.hpp"

#include <cmath>
#include <string>

namespace cmf {

namespace {

void check_same_spec(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
    if (a.spec() != b.spec()) {
        throw SpecMismatch(std::string(op) + ": block structures differ");
    }
}

}  // namespace

BlockSpec::BlockSpec(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) {
        throw Error("BlockSpec: at least one block required");
    }
    offsets_.reserve(sizes_.size());
    for (int n : sizes_) {
        if (n < 1) {
            throw Error("BlockSpec: block sizes must be positive");
        }
        offsets_.push_back(total_);
        total_ += n;
        cdim_ += n * n;
    }
}

AlgebraElement::AlgebraElement(BlockSpec spec, std::vector<Eigen::MatrixXcd> blocks)
    : spec_(std::move(spec)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != spec_.block_count()) {
        throw Error("AlgebraElement: block count does not match spec");
    }
    for (int k = 0; k < spec_.block_count(); ++k) {
        const auto& b = blocks_[static_cast<std::size_t>(k)];
        if (b.rows() != spec_.block_size(k) || b.cols() != spec_.block_size(k)) {
            throw Error("AlgebraElement: block " + std::to_string(k) + " has wrong shape");
        }
    }
}

AlgebraElement AlgebraElement::zero(const BlockSpec& spec) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(spec.block_count()));
    for (int k = 0; k < spec.block_count(); ++k) {
        blocks.emplace_back(Eigen::MatrixXcd::Zero(spec.block_size(k), spec.block_size(k)));
    }
    return AlgebraElement(spec, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const BlockSpec& spec) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(spec.block_count()));
    for (int k = 0; k < spec.block_count(); ++k) {
        blocks.emplace_back(Eigen::MatrixXcd::Identity(spec.block_size(k), spec.block_size(k)));
    }
    return AlgebraElement(spec, std::move(blocks));
}

AlgebraElement AlgebraElement::diagonal(const BlockSpec& spec, const std::vector<cdouble>& entries) {
    if (static_cast<int>(entries.size()) != spec.total_dim()) {
        throw Error("AlgebraElement::diagonal: expected one entry per embedded row");
    }
    AlgebraElement a = zero(spec);
    std::size_t idx = 0;
    for (int k = 0; k < spec.block_count(); ++k) {
        for (int r = 0; r < spec.block_size(k); ++r) {
            a.block(k)(r, r) = entries[idx++];
        }
    }
    return a;
}

Eigen::MatrixXcd AlgebraElement::embedded() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(spec_.total_dim(), spec_.total_dim());
    for (int k = 0; k < spec_.block_count(); ++k) {
        const int off = spec_.block_offset(k);
        const int n = spec_.block_size(k);
        m.block(off, off, n, n) = blocks_[static_cast<std::size_t>(k)];
    }
    return m;
}

Eigen::VectorXcd AlgebraElement::vectorized() const {
    Eigen::VectorXcd v(spec_.complex_dim());
    Eigen::Index idx = 0;
    for (int k = 0; k < spec_.block_count(); ++k) {
        const auto& b = blocks_[static_cast<std::size_t>(k)];
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            for (Eigen::Index c = 0; c < b.cols(); ++c) {
                v(idx++) = b(r, c);
            }
        }
    }
    return v;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
    check_same_spec(*this, rhs, "add");
    for (int k = 0; k < block_count(); ++k) {
        blocks_[static_cast<std::size_t>(k)] += rhs.block(k);
    }
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
    check_same_spec(*this, rhs, "subtract");
    for (int k = 0; k < block_count(); ++k) {
        blocks_[static_cast<std::size_t>(k)] -= rhs.block(k);
    }
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(cdouble scalar) {
    for (auto& b : blocks_) {
        b *= scalar;
    }
    return *this;
}

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) {
    lhs += rhs;
    return lhs;
}

AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) {
    lhs -= rhs;
    return lhs;
}

AlgebraElement operator-(const AlgebraElement& a) {
    AlgebraElement r = a;
    r *= cdouble(-1.0, 0.0);
    return r;
}

AlgebraElement operator*(AlgebraElement a, cdouble scalar) {
    a *= scalar;
    return a;
}

AlgebraElement operator*(cdouble scalar, AlgebraElement a) {
    a *= scalar;
    return a;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    check_same_spec(a, b, "multiply");
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(a.block_count()));
    for (int k = 0; k < a.block_count(); ++k) {
        blocks.emplace_back(a.block(k) * b.block(k));
    }
    return AlgebraElement(a.spec(), std::move(blocks));
}

AlgebraElement adjoint(const AlgebraElement& a) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(a.block_count()));
    for (int k = 0; k < a.block_count(); ++k) {
        blocks.emplace_back(a.block(k).adjoint());
    }
    return AlgebraElement(a.spec(), std::move(blocks));
}

double norm(const AlgebraElement& a) {
    double best = 0.0;
    for (int k = 0; k < a.block_count(); ++k) {
        if (a.spec().block_size(k) == 1) {
            best = std::max(best, std::abs(a.block(k)(0, 0)));
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.block(k));
            best = std::max(best, svd.singularValues()(0));
        }
    }
    return best;
}

bool is_positive(const AlgebraElement& a, double tol) {
    for (int k = 0; k < a.block_count(); ++k) {
        const Eigen::MatrixXcd& b = a.block(k);
        const double herm_defect = (b - b.adjoint().eval()).cwiseAbs().maxCoeff();
        if (herm_defect > tol) {
            return false;
        }
        Eigen::MatrixXcd h = 0.5 * (b + b.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -tol) {
            return false;
        }
    }
    return true;
}

double smallest_singular_value(const AlgebraElement& a) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < a.block_count(); ++k) {
        if (a.spec().block_size(k) == 1) {
            worst = std::min(worst, std::abs(a.block(k)(0, 0)));
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.block(k));
            worst = std::min(worst, svd.singularValues().minCoeff());
        }
    }
    return worst;
}

AlgebraElement inverse(const AlgebraElement& a, double tol) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(a.block_count()));
    for (int k = 0; k < a.block_count(); ++k) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.block(k),
                                               Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv.size() == 0 || sv.minCoeff() <= tol) {
            throw Singular("inverse: block " + std::to_string(k) +
                           " has smallest singular value <= tolerance");
        }
        blocks.emplace_back(svd.matrixV() * sv.cwiseInverse().asDiagonal() *
                            svd.matrixU().adjoint());
    }
    return AlgebraElement(a.spec(), std::move(blocks));
}

AlgebraElement from_embedded(const BlockSpec& spec, const Eigen::MatrixXcd& m) {
    if (m.rows() != spec.total_dim() || m.cols() != spec.total_dim()) {
        throw SpecMismatch("from_embedded: matrix shape does not match spec");
    }
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(spec.block_count()));
    for (int k = 0; k < spec.block_count(); ++k) {
        const int off = spec.block_offset(k);
        const int n = spec.block_size(k);
        blocks.emplace_back(m.block(off, off, n, n));
    }
    return AlgebraElement(spec, std::move(blocks));
}

AlgebraElement from_vectorized(const BlockSpec& spec, const Eigen::VectorXcd& v) {
    if (v.size() != spec.complex_dim()) {
        throw SpecMismatch("from_vectorized: vector length does not match spec");
    }
    AlgebraElement a = AlgebraElement::zero(spec);
    Eigen::Index idx = 0;
    for (int k = 0; k < spec.block_count(); ++k) {
        auto& b = a.block(k);
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            for (Eigen::Index c = 0; c < b.cols(); ++c) {
                b(r, c) = v(idx++);
            }
        }
    }
    return a;
}

double off_pattern_magnitude(const BlockSpec& spec, const Eigen::MatrixXcd& m) {
    if (m.rows() != spec.total_dim() || m.cols() != spec.total_dim()) {
        throw SpecMismatch("off_pattern_magnitude: matrix shape does not match spec");
    }
    Eigen::MatrixXcd masked = m;
    for (int k = 0; k < spec.block_count(); ++k) {
        const int off = spec.block_offset(k);
        const int n = spec.block_size(k);
        masked.block(off, off, n, n).setZero();
    }
    return masked.cwiseAbs().maxCoeff();
}

}  // namespace cmf
