#ifndef CMF_MEASURE_HPP
#define CMF_MEASURE_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "cmf/algebra.hpp"

namespace cmf {

/// Highest polynomial degree accepted for stored piecewise maps. Products of
/// two stored maps may reach twice this degree during integration.
inline constexpr int kMaxPolyDegree = 16;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double w) const { return lo <= w && w <= hi; }
};

struct Atom {
    double point = 0.0;
    double mass = 0.0;
};

/// Measure space: disjoint real intervals carrying Lebesgue measure plus
/// finitely many weighted atoms. An atom may sit inside an interval, in which
/// case the measure is Lebesgue plus a point mass there.
class MeasureSpace {
public:
    MeasureSpace(std::vector<Interval> intervals, std::vector<Atom> atoms);

    const std::vector<Interval>& intervals() const { return intervals_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t interval_count() const { return intervals_.size(); }
    std::size_t atom_count() const { return atoms_.size(); }

    /// Index of the atom sitting exactly at `point`, if any.
    std::optional<std::size_t> atom_at(double point) const;
    /// Index of the first interval containing w (closed endpoints).
    std::optional<std::size_t> interval_containing(double w) const;
    /// Point mass at w; zero when w carries no atom.
    double mass_at(double point) const;
    bool in_domain(double w) const;
    bool purely_atomic() const { return intervals_.empty() && !atoms_.empty(); }

private:
    std::vector<Interval> intervals_;
    std::vector<Atom> atoms_;
};

using MeasurePtr = std::shared_ptr<const MeasureSpace>;

/// Piecewise-polynomial map into the algebra: one coefficient list per
/// measure interval (ascending powers) and one value per atom. Alignment
/// with a measure space is positional.
class AlgebraPoly {
public:
    AlgebraPoly(BlockSpec spec, std::vector<std::vector<AlgebraElement>> interval_coeffs,
                std::vector<AlgebraElement> atom_values);

    static AlgebraPoly zero(const BlockSpec& spec, std::size_t n_intervals,
                            std::size_t n_atoms);

    const BlockSpec& spec() const { return spec_; }
    std::size_t interval_count() const { return interval_coeffs_.size(); }
    std::size_t atom_count() const { return atom_values_.size(); }
    const std::vector<AlgebraElement>& interval_coeffs(std::size_t i) const {
        return interval_coeffs_[i];
    }
    const AlgebraElement& atom_value(std::size_t k) const { return atom_values_[k]; }
    int degree() const;

    /// Polynomial value on interval i at w (no domain check).
    AlgebraElement eval_on_interval(std::size_t i, double w) const;

    AlgebraPoly& operator+=(const AlgebraPoly& rhs);
    AlgebraPoly& operator-=(const AlgebraPoly& rhs);
    AlgebraPoly& operator*=(cdouble scalar);

private:
    BlockSpec spec_;
    std::vector<std::vector<AlgebraElement>> interval_coeffs_;
    std::vector<AlgebraElement> atom_values_;
};

AlgebraPoly operator+(AlgebraPoly lhs, const AlgebraPoly& rhs);
AlgebraPoly operator-(AlgebraPoly lhs, const AlgebraPoly& rhs);
AlgebraPoly operator*(AlgebraPoly p, cdouble scalar);
AlgebraPoly operator*(cdouble scalar, AlgebraPoly p);

/// Integral of w^power over the interval: (hi^(p+1) - lo^(p+1)) / (p+1).
double moment(const Interval& iv, int power);

/// Exact integral of P over the measure, skipping the atoms listed in
/// `excluded_atoms`. Summation order is fixed: intervals in listed order
/// (powers ascending), then atoms in listed order.
AlgebraElement integrate(const AlgebraPoly& p, const MeasureSpace& sp,
                         const std::vector<std::size_t>& excluded_atoms = {});

/// L2 inner product: exact integral of w -> P(w) Q(w)^*.
AlgebraElement l2_inner(const AlgebraPoly& p, const AlgebraPoly& q, const MeasureSpace& sp,
                        const std::vector<std::size_t>& excluded_atoms = {});

/// Pointwise value at w: atom value when w carries an atom, else the
/// polynomial value on the containing interval. Throws OutOfDomain.
AlgebraElement eval(const AlgebraPoly& p, const MeasureSpace& sp, double w);

}  // namespace cmf

#endif  // CMF_MEASURE_HPP
