#include "cmf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmf {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) {
        r *= x;
    }
    return r;
}

bool excluded(const std::vector<std::size_t>& set, std::size_t k) {
    return std::find(set.begin(), set.end(), k) != set.end();
}

void check_alignment(const AlgebraPoly& p, const MeasureSpace& sp, const char* op) {
    if (p.interval_count() != sp.interval_count() || p.atom_count() != sp.atom_count()) {
        throw SpecMismatch(std::string(op) + ": polynomial is not aligned with the measure");
    }
}

}  // namespace

MeasureSpace::MeasureSpace(std::vector<Interval> intervals, std::vector<Atom> atoms)
    : intervals_(std::move(intervals)), atoms_(std::move(atoms)) {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (!(intervals_[i].lo < intervals_[i].hi)) {
            throw Error("MeasureSpace: interval " + std::to_string(i) + " must have lo < hi");
        }
    }
    std::vector<Interval> sorted = intervals_;
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].lo < sorted[i - 1].hi) {
            throw Error("MeasureSpace: intervals overlap");
        }
    }
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        if (!(atoms_[k].mass > 0.0)) {
            throw Error("MeasureSpace: atom " + std::to_string(k) + " must have positive mass");
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (atoms_[j].point == atoms_[k].point) {
                throw Error("MeasureSpace: duplicate atom point");
            }
        }
    }
}

std::optional<std::size_t> MeasureSpace::atom_at(double point) const {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        if (atoms_[k].point == point) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> MeasureSpace::interval_containing(double w) const {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (intervals_[i].contains(w)) {
            return i;
        }
    }
    return std::nullopt;
}

double MeasureSpace::mass_at(double point) const {
    const auto k = atom_at(point);
    return k ? atoms_[*k].mass : 0.0;
}

bool MeasureSpace::in_domain(double w) const {
    return atom_at(w).has_value() || interval_containing(w).has_value();
}

AlgebraPoly::AlgebraPoly(BlockSpec spec, std::vector<std::vector<AlgebraElement>> interval_coeffs,
                         std::vector<AlgebraElement> atom_values)
    : spec_(std::move(spec)),
      interval_coeffs_(std::move(interval_coeffs)),
      atom_values_(std::move(atom_values)) {
    for (const auto& coeffs : interval_coeffs_) {
        if (static_cast<int>(coeffs.size()) > kMaxPolyDegree + 1) {
            throw Error("AlgebraPoly: degree exceeds cap " + std::to_string(kMaxPolyDegree));
        }
        for (const auto& c : coeffs) {
            if (c.spec() != spec_) {
                throw SpecMismatch("AlgebraPoly: coefficient spec mismatch");
            }
        }
    }
    for (const auto& v : atom_values_) {
        if (v.spec() != spec_) {
            throw SpecMismatch("AlgebraPoly: atom value spec mismatch");
        }
    }
}

AlgebraPoly AlgebraPoly::zero(const BlockSpec& spec, std::size_t n_intervals,
                              std::size_t n_atoms) {
    std::vector<std::vector<AlgebraElement>> coeffs(n_intervals);
    std::vector<AlgebraElement> values(n_atoms, AlgebraElement::zero(spec));
    return AlgebraPoly(spec, std::move(coeffs), std::move(values));
}

int AlgebraPoly::degree() const {
    int d = 0;
    for (const auto& coeffs : interval_coeffs_) {
        d = std::max(d, static_cast<int>(coeffs.size()) - 1);
    }
    return d;
}

AlgebraElement AlgebraPoly::eval_on_interval(std::size_t i, double w) const {
    const auto& coeffs = interval_coeffs_[i];
    AlgebraElement acc = AlgebraElement::zero(spec_);
    for (std::size_t j = coeffs.size(); j-- > 0;) {
        acc = acc * cdouble(w, 0.0) + coeffs[j];
    }
    return acc;
}

AlgebraPoly& AlgebraPoly::operator+=(const AlgebraPoly& rhs) {
    if (spec_ != rhs.spec_ || interval_count() != rhs.interval_count() ||
        atom_count() != rhs.atom_count()) {
        throw SpecMismatch("AlgebraPoly: add with incompatible shape");
    }
    for (std::size_t i = 0; i < interval_coeffs_.size(); ++i) {
        auto& mine = interval_coeffs_[i];
        const auto& theirs = rhs.interval_coeffs_[i];
        while (mine.size() < theirs.size()) {
            mine.push_back(AlgebraElement::zero(spec_));
        }
        for (std::size_t j = 0; j < theirs.size(); ++j) {
            mine[j] += theirs[j];
        }
    }
    for (std::size_t k = 0; k < atom_values_.size(); ++k) {
        atom_values_[k] += rhs.atom_values_[k];
    }
    return *this;
}

AlgebraPoly& AlgebraPoly::operator-=(const AlgebraPoly& rhs) {
    *this += rhs * cdouble(-1.0, 0.0);
    return *this;
}

AlgebraPoly& AlgebraPoly::operator*=(cdouble scalar) {
    for (auto& coeffs : interval_coeffs_) {
        for (auto& c : coeffs) {
            c *= scalar;
        }
    }
    for (auto& v : atom_values_) {
        v *= scalar;
    }
    return *this;
}

AlgebraPoly operator+(AlgebraPoly lhs, const AlgebraPoly& rhs) {
    lhs += rhs;
    return lhs;
}

AlgebraPoly operator-(AlgebraPoly lhs, const AlgebraPoly& rhs) {
    lhs -= rhs;
    return lhs;
}

AlgebraPoly operator*(AlgebraPoly p, cdouble scalar) {
    p *= scalar;
    return p;
}

AlgebraPoly operator*(cdouble scalar, AlgebraPoly p) {
    p *= scalar;
    return p;
}

double moment(const Interval& iv, int power) {
    return (ipow(iv.hi, power + 1) - ipow(iv.lo, power + 1)) / (power + 1);
}

AlgebraElement integrate(const AlgebraPoly& p, const MeasureSpace& sp,
                         const std::vector<std::size_t>& excluded_atoms) {
    check_alignment(p, sp, "integrate");
    AlgebraElement acc = AlgebraElement::zero(p.spec());
    for (std::size_t i = 0; i < sp.interval_count(); ++i) {
        const auto& coeffs = p.interval_coeffs(i);
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            acc += coeffs[j] * cdouble(moment(sp.intervals()[i], static_cast<int>(j)), 0.0);
        }
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (excluded(excluded_atoms, k)) {
            continue;
        }
        acc += p.atom_value(k) * cdouble(sp.atoms()[k].mass, 0.0);
    }
    return acc;
}

AlgebraElement l2_inner(const AlgebraPoly& p, const AlgebraPoly& q, const MeasureSpace& sp,
                        const std::vector<std::size_t>& excluded_atoms) {
    check_alignment(p, sp, "l2_inner");
    check_alignment(q, sp, "l2_inner");
    if (p.spec() != q.spec()) {
        throw SpecMismatch("l2_inner: block structures differ");
    }
    AlgebraElement acc = AlgebraElement::zero(p.spec());
    for (std::size_t i = 0; i < sp.interval_count(); ++i) {
        const auto& pc = p.interval_coeffs(i);
        const auto& qc = q.interval_coeffs(i);
        if (pc.empty() || qc.empty()) {
            continue;
        }
        std::vector<AlgebraElement> qa;
        qa.reserve(qc.size());
        for (const auto& c : qc) {
            qa.push_back(adjoint(c));
        }
        const std::size_t top = pc.size() + qc.size() - 2;
        for (std::size_t t = 0; t <= top; ++t) {
            AlgebraElement conv = AlgebraElement::zero(p.spec());
            for (std::size_t j = 0; j < pc.size(); ++j) {
                if (t < j || t - j >= qa.size()) {
                    continue;
                }
                conv += pc[j] * qa[t - j];
            }
            acc += conv * cdouble(moment(sp.intervals()[i], static_cast<int>(t)), 0.0);
        }
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (excluded(excluded_atoms, k)) {
            continue;
        }
        acc += (p.atom_value(k) * adjoint(q.atom_value(k))) * cdouble(sp.atoms()[k].mass, 0.0);
    }
    return acc;
}

AlgebraElement eval(const AlgebraPoly& p, const MeasureSpace& sp, double w) {
    check_alignment(p, sp, "eval");
    if (const auto k = sp.atom_at(w)) {
        return p.atom_value(*k);
    }
    if (const auto i = sp.interval_containing(w)) {
        return p.eval_on_interval(*i, w);
    }
    throw OutOfDomain("eval: point " + std::to_string(w) + " is not in the measure's domain");
}

}  // namespace cmf
