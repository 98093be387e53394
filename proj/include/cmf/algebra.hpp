#ifndef CMF_ALGEBRA_HPP
#define CMF_ALGEBRA_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cmf/errors.hpp"

namespace cmf {

using cdouble = std::complex<double>;

/// Default numerical tolerance used across the library.
inline constexpr double kDefaultTol = 1e-10;

/// Block structure of a finite direct sum of full complex matrix algebras,
/// embedded block-diagonally in the p x p matrices where p is the sum of
/// the block sizes.
class BlockSpec {
public:
    explicit BlockSpec(std::vector<int> sizes);

    int block_count() const { return static_cast<int>(sizes_.size()); }
    int block_size(int k) const { return sizes_[static_cast<std::size_t>(k)]; }
    int block_offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
    /// Embedding dimension p.
    int total_dim() const { return total_; }
    /// Complex dimension of the algebra, the sum of the squared block sizes.
    int complex_dim() const { return cdim_; }
    bool commutative() const { return cdim_ == block_count(); }
    const std::vector<int>& sizes() const { return sizes_; }

    friend bool operator==(const BlockSpec& a, const BlockSpec& b) {
        return a.sizes_ == b.sizes_;
    }
    friend bool operator!=(const BlockSpec& a, const BlockSpec& b) { return !(a == b); }

private:
    std::vector<int> sizes_;
    std::vector<int> offsets_;
    int total_ = 0;
    int cdim_ = 0;
};

/// Element of a block-diagonal matrix algebra; one dense complex matrix per block.
class AlgebraElement {
public:
    AlgebraElement(BlockSpec spec, std::vector<Eigen::MatrixXcd> blocks);

    static AlgebraElement zero(const BlockSpec& spec);
    static AlgebraElement identity(const BlockSpec& spec);
    /// Element with the given entries down the full embedded diagonal;
    /// `entries` has length total_dim().
    static AlgebraElement diagonal(const BlockSpec& spec, const std::vector<cdouble>& entries);

    const BlockSpec& spec() const { return spec_; }
    int block_count() const { return spec_.block_count(); }
    const Eigen::MatrixXcd& block(int k) const { return blocks_[static_cast<std::size_t>(k)]; }
    Eigen::MatrixXcd& block(int k) { return blocks_[static_cast<std::size_t>(k)]; }

    /// The element as a block-diagonal p x p matrix.
    Eigen::MatrixXcd embedded() const;
    /// Block entries stacked row-major, length complex_dim().
    Eigen::VectorXcd vectorized() const;

    AlgebraElement& operator+=(const AlgebraElement& rhs);
    AlgebraElement& operator-=(const AlgebraElement& rhs);
    AlgebraElement& operator*=(cdouble scalar);

private:
    BlockSpec spec_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs);
AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs);
AlgebraElement operator-(const AlgebraElement& a);
AlgebraElement operator*(AlgebraElement a, cdouble scalar);
AlgebraElement operator*(cdouble scalar, AlgebraElement a);
/// Blockwise matrix product; throws SpecMismatch on different block structure.
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

/// Blockwise conjugate transpose.
AlgebraElement adjoint(const AlgebraElement& a);

/// C*-norm: maximum over blocks of the largest singular value.
double norm(const AlgebraElement& a);

/// True iff every block is Hermitian within tol and all eigenvalues are >= -tol.
bool is_positive(const AlgebraElement& a, double tol = kDefaultTol);

/// Smallest singular value over all blocks.
double smallest_singular_value(const AlgebraElement& a);

/// Blockwise inverse; throws Singular if any block's smallest singular value
/// is <= tol.
AlgebraElement inverse(const AlgebraElement& a, double tol = kDefaultTol);

/// Project a p x p matrix onto the block-diagonal representation, discarding
/// entries outside the block pattern.
AlgebraElement from_embedded(const BlockSpec& spec, const Eigen::MatrixXcd& m);

/// Inverse of vectorized(): rebuild an element from stacked block entries.
AlgebraElement from_vectorized(const BlockSpec& spec, const Eigen::VectorXcd& v);

/// Largest entry magnitude of the embedded matrix outside the block pattern.
double off_pattern_magnitude(const BlockSpec& spec, const Eigen::MatrixXcd& m);

}  // namespace cmf

#endif  // CMF_ALGEBRA_HPP
