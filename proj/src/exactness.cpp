#include "cmf/exactness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmf {

namespace {

std::vector<std::size_t> atom_exclusion(const MeasureSpace& sp, double omega0) {
    std::vector<std::size_t> out;
    if (const auto k = sp.atom_at(omega0)) {
        out.push_back(*k);
    }
    return out;
}

}  // namespace

AlgebraPoly psi_map(const FrameMap& f, double omega0, double tol) {
    const ModuleElement at0 = evaluate(f, omega0);
    const FrameMap dual = canonical_dual(f, tol);
    return analysis(dual, at0);
}

double psi_identity_defect(const FrameMap& f, double omega0, double tol) {
    const MeasureSpace& sp = *f.measure();
    const AlgebraPoly psi = psi_map(f, omega0, tol);
    const AlgebraElement lhs = eval(psi, sp, omega0);
    const double mass = sp.mass_at(omega0);
    AlgebraElement rhs = l2_inner(psi, psi, sp, atom_exclusion(sp, omega0));
    rhs += (lhs * lhs) * cdouble(mass, 0.0);
    return norm(lhs - rhs);
}

RemovalReport removal_check_atom(const FrameMap& f, double omega0, double tol,
                                 const FrameMap* explicit_dual) {
    const MeasureSpace& sp = *f.measure();
    const ModuleElement at0 = evaluate(f, omega0);
    const FrameMap dual = canonical_dual(f, tol);
    const AlgebraPoly psi = analysis(dual, at0);
    const AlgebraElement psi0 = eval(psi, sp, omega0);
    const BlockSpec& spec = f.space()->algebra();

    RemovalReport report{omega0, sp.mass_at(omega0), psi0, false,
                         RemovalVerdict::MeasureZeroTrivial,
                         std::nullopt, std::nullopt, std::nullopt, std::nullopt};

    if (report.mass == 0.0) {
        report.criterion_invertible = true;
        return report;
    }

    const AlgebraElement criterion =
        AlgebraElement::identity(spec) - psi0 * cdouble(report.mass, 0.0);
    AlgebraElement inv = AlgebraElement::zero(spec);
    try {
        inv = inverse(criterion, tol);
        report.criterion_invertible = true;
    } catch (const Singular&) {
        report.verdict = RemovalVerdict::NotFrame;
        return report;
    }

    report.a_norm = norm(inv);
    const AlgebraElement rest =
        l2_inner(psi, psi, sp, atom_exclusion(sp, omega0));
    report.k = (*report.a_norm) * (*report.a_norm) * norm(rest);
    const BoundsReport bounds = require_frame_bounds(f, BoundsOptions{.tol = tol});
    report.guaranteed_lower_bound = bounds.lower / (1.0 + *report.k * report.mass);
    report.verdict = RemovalVerdict::FrameWithBound;

    if (explicit_dual != nullptr) {
        const DualityReport dr = duality_defect(f, *explicit_dual, tol);
        if (!dr.is_dual) {
            throw NotDual("removal_check_atom: supplied map is not a dual at tolerance");
        }
        const AlgebraElement pairing = inner(at0, evaluate(*explicit_dual, omega0));
        const AlgebraElement criterion_g =
            AlgebraElement::identity(spec) - pairing * cdouble(report.mass, 0.0);
        try {
            const AlgebraElement inv_g = inverse(criterion_g, tol);
            const double bg = frame_bounds(*explicit_dual, BoundsOptions{.tol = tol}).upper;
            const double fn = norm(at0);
            const double denom =
                1.0 + norm(inv_g) * norm(inv_g) * bg * fn * fn * report.mass;
            report.general_dual_bound = bounds.lower / denom;
        } catch (const Singular&) {
            // criterion with this dual is not invertible; no bound follows
        }
    }
    return report;
}

SubsetRemovalReport subset_removal_check(const FrameMap& f, const SubsetSelection& subset,
                                         double tol) {
    const MeasureSpace& sp = *f.measure();
    const ModuleSpace& space = *f.space();

    // Resolve each chosen subinterval to its containing measure interval.
    std::vector<std::vector<Interval>> pieces(sp.interval_count());
    for (const Interval& piece : subset.subintervals) {
        if (!(piece.lo < piece.hi)) {
            throw OutOfDomain("subset_removal_check: subinterval must have lo < hi");
        }
        bool placed = false;
        for (std::size_t i = 0; i < sp.interval_count(); ++i) {
            const Interval& iv = sp.intervals()[i];
            if (piece.lo >= iv.lo && piece.hi <= iv.hi) {
                pieces[i].push_back(piece);
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw OutOfDomain("subset_removal_check: subinterval is not contained in the domain");
        }
    }

    // Atoms inside a chosen subinterval belong to the subset as a set.
    std::vector<bool> atom_in(sp.atom_count(), false);
    for (std::size_t k : subset.atom_indices) {
        if (k >= sp.atom_count()) {
            throw OutOfDomain("subset_removal_check: atom index out of range");
        }
        atom_in[k] = true;
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        for (const auto& list : pieces) {
            for (const Interval& piece : list) {
                if (piece.contains(sp.atoms()[k].point)) {
                    atom_in[k] = true;
                }
            }
        }
    }

    double subset_mass = 0.0;
    for (const auto& list : pieces) {
        for (const Interval& piece : list) {
            subset_mass += piece.length();
        }
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (atom_in[k]) {
            subset_mass += sp.atoms()[k].mass;
        }
    }
    if (subset_mass <= 0.0) {
        throw Error("subset_removal_check: subset has zero measure");
    }

    // f = integral of F over the subset, by exact moments.
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(space.rows(), space.cols());
    for (std::size_t i = 0; i < sp.interval_count(); ++i) {
        const auto& coeffs = f.interval_coeffs(i);
        for (const Interval& piece : pieces[i]) {
            for (std::size_t j = 0; j < coeffs.size(); ++j) {
                acc += moment(piece, static_cast<int>(j)) * space.ambient(coeffs[j]);
            }
        }
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (atom_in[k]) {
            acc += sp.atoms()[k].mass * space.ambient(f.atom_value(k));
        }
    }
    const ModuleElement subset_integral(f.space(), space.coords(acc, tol));
    if (norm(subset_integral) <= tol) {
        throw ZeroVector("subset_removal_check: the subset integral of F vanishes");
    }

    // Hypothesis: <f, S^{-1}F(w)> equals 1 on the subset and 0 elsewhere.
    const FrameMap dual = canonical_dual(f, tol);
    const AlgebraPoly h = analysis(dual, subset_integral);
    const BlockSpec& spec = space.algebra();
    const AlgebraElement one = AlgebraElement::identity(spec);

    for (std::size_t i = 0; i < sp.interval_count(); ++i) {
        const Interval& iv = sp.intervals()[i];
        double covered = 0.0;
        for (const Interval& piece : pieces[i]) {
            covered += piece.length();
        }
        const bool full = std::abs(covered - iv.length()) <= 1e-12 * std::max(1.0, iv.length());
        const bool empty = covered == 0.0;
        if (!full && !empty) {
            throw HypothesisFails("interval " + std::to_string(i) +
                                  ": partial coverage, a polynomial cannot equal the "
                                  "characteristic function there");
        }
        const auto& coeffs = h.interval_coeffs(i);
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            const AlgebraElement want =
                (full && j == 0) ? one : AlgebraElement::zero(spec);
            if (norm(coeffs[j] - want) > tol) {
                throw HypothesisFails("interval " + std::to_string(i) + ", power " +
                                      std::to_string(j) +
                                      ": coefficient differs from the characteristic function");
            }
        }
        if (full && coeffs.empty()) {
            throw HypothesisFails("interval " + std::to_string(i) +
                                  ": zero polynomial on a covered interval");
        }
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        const AlgebraElement want = atom_in[k] ? one : AlgebraElement::zero(spec);
        if (norm(h.atom_value(k) - want) > tol) {
            throw HypothesisFails("atom " + std::to_string(k) +
                                  ": value differs from the characteristic function");
        }
    }

    // Witness: S^{-1} f annihilates F off the subset.
    const ModuleOperator sinv = frame_operator(f, tol).inverse(tol);
    const ModuleElement witness = sinv.apply(subset_integral);
    const AlgebraPoly wf = analysis(f, witness);
    double max_off = 0.0;
    for (std::size_t i = 0; i < sp.interval_count(); ++i) {
        double covered = 0.0;
        for (const Interval& piece : pieces[i]) {
            covered += piece.length();
        }
        if (covered > 0.0) {
            continue;
        }
        for (const auto& c : wf.interval_coeffs(i)) {
            max_off = std::max(max_off, norm(c));
        }
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (!atom_in[k]) {
            max_off = std::max(max_off, norm(wf.atom_value(k)));
        }
    }

    SubsetRemovalReport report{subset_integral, witness, subset_mass, max_off,
                               max_off <= tol};
    return report;
}

RieszReport riesz_type_check(const FrameMap& f, double tol) {
    const MeasureSpace& sp = *f.measure();
    const ModuleSpace& space = *f.space();
    RieszReport report;

    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (norm(ModuleElement(f.space(), f.atom_value(k))) <= tol) {
            report.zero_atoms.push_back(k);
        }
    }
    if (!sp.purely_atomic()) {
        return report;
    }
    report.applicable = true;

    const int m = space.dim();
    const int dim_a = space.algebra().complex_dim();
    const int target = static_cast<int>(sp.atom_count()) * dim_a;
    report.target_dim = target;

    Eigen::MatrixXcd mat(target, m);
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
        e(i) = cdouble(1.0, 0.0);
        const ModuleElement basis_elem(f.space(), e);
        for (std::size_t k = 0; k < sp.atom_count(); ++k) {
            const AlgebraElement a =
                inner(basis_elem, ModuleElement(f.space(), f.atom_value(k)));
            mat.block(static_cast<Eigen::Index>(k) * dim_a, i, dim_a, 1) = a.vectorized();
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
    const auto& sv = svd.singularValues();
    const double thr = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > thr) {
            ++rank;
        }
    }
    report.rank = rank;
    report.is_riesz_type = rank == target;
    return report;
}

SecondDualReport non_riesz_via_removal(const FrameMap& f, double omega0, double tol) {
    RemovalReport removal = removal_check_atom(f, omega0, tol);
    if (removal.verdict != RemovalVerdict::FrameWithBound) {
        throw NotAFrame("non_riesz_via_removal: removal at " + std::to_string(omega0) +
                        " does not leave a frame");
    }
    const MeasureSpace& sp = *f.measure();
    const std::size_t removed = *sp.atom_at(omega0);

    std::vector<Atom> rest_atoms;
    std::vector<Eigen::VectorXcd> rest_values;
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (k == removed) {
            continue;
        }
        rest_atoms.push_back(sp.atoms()[k]);
        rest_values.push_back(f.atom_value(k));
    }
    const auto restricted_measure =
        std::make_shared<const MeasureSpace>(sp.intervals(), std::move(rest_atoms));
    std::vector<std::vector<Eigen::VectorXcd>> coeffs;
    for (std::size_t i = 0; i < f.interval_count(); ++i) {
        coeffs.push_back(f.interval_coeffs(i));
    }
    const FrameMap restricted(f.space(), restricted_measure, std::move(coeffs),
                              std::move(rest_values));
    const FrameMap restricted_dual = canonical_dual(restricted, tol);

    // Extend by zero at the removed atom, back on the original measure.
    std::vector<std::vector<Eigen::VectorXcd>> dual_coeffs;
    for (std::size_t i = 0; i < restricted_dual.interval_count(); ++i) {
        dual_coeffs.push_back(restricted_dual.interval_coeffs(i));
    }
    std::vector<Eigen::VectorXcd> dual_values;
    std::size_t src = 0;
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        if (k == removed) {
            dual_values.push_back(Eigen::VectorXcd::Zero(f.space()->dim()));
        } else {
            dual_values.push_back(restricted_dual.atom_value(src++));
        }
    }
    FrameMap second(f.space(), f.measure(), std::move(dual_coeffs), std::move(dual_values));

    const DualityReport dr = duality_defect(f, second, tol);
    const FrameMap full_dual = canonical_dual(f, tol);
    const double discrepancy =
        norm(evaluate(second, omega0) - evaluate(full_dual, omega0));
    return SecondDualReport{std::move(removal), std::move(second), dr.defect, discrepancy};
}

ExactnessScan exactness_scan(const FrameMap& f, double tol) {
    const MeasureSpace& sp = *f.measure();
    if (!sp.purely_atomic()) {
        throw NotApplicable("exactness_scan: measure is not purely atomic");
    }
    ExactnessScan scan;
    scan.exact_on_atoms = true;
    for (const Atom& atom : sp.atoms()) {
        scan.per_atom.push_back(removal_check_atom(f, atom.point, tol));
        if (scan.per_atom.back().verdict != RemovalVerdict::NotFrame) {
            scan.exact_on_atoms = false;
        }
    }
    return scan;
}

double minimal_coefficient_defect(const FrameMap& f, const ModuleElement& elem,
                                  const AlgebraPoly& phi, double tol) {
    const ModuleElement synthesized = synthesis(f, phi, tol);
    const double residual = norm(synthesized - elem);
    if (residual > tol * std::max(1.0, norm(elem))) {
        throw NotACoefficient("minimal_coefficient_defect: coefficients synthesize an element " +
                              std::to_string(residual) + " away from the target");
    }
    const MeasureSpace& sp = *f.measure();
    const FrameMap dual = canonical_dual(f, tol);
    const AlgebraPoly canonical = analysis(dual, elem);
    const AlgebraPoly deviation = phi - canonical;
    const AlgebraElement lhs = l2_inner(phi, phi, sp);
    const AlgebraElement rhs =
        l2_inner(canonical, canonical, sp) + l2_inner(deviation, deviation, sp);
    return norm(lhs - rhs);
}

}  // namespace cmf
