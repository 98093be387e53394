#include "cmf/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double symmetric() { return 2.0 * uniform() - 1.0; }
};

constexpr int kHaltonPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79};

double halton(std::uint64_t index, int base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
    }
    return r;
}

// Deterministic low-discrepancy point on the unit sphere of C^n: Halton
// coordinates pushed through Box-Muller, then normalized.
Eigen::VectorXcd sphere_direction(int n, std::uint64_t index, std::uint64_t seed) {
    const std::uint64_t offset = 1 + (seed % 9973);
    Eigen::VectorXcd v(n);
    for (int j = 0; j < n; ++j) {
        const double u1 = halton(index + offset, kHaltonPrimes[(2 * j) % 22]);
        const double u2 = halton(index + offset, kHaltonPrimes[(2 * j + 1) % 22]);
        const double r = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
        v(j) = cdouble(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
    }
    const double len = v.norm();
    if (len < 1e-12) {
        v.setZero();
        v(0) = cdouble(1.0, 0.0);
        return v;
    }
    return v / len;
}

void require_same_measure(const FrameMap& f, const FrameMap& g, const char* op) {
    if (f.measure().get() != g.measure().get()) {
        throw SpaceMismatch(std::string(op) + ": maps live on different measure spaces");
    }
}

}  // namespace

FrameMap::FrameMap(SpacePtr space, MeasurePtr measure,
                   std::vector<std::vector<Eigen::VectorXcd>> interval_coeffs,
                   std::vector<Eigen::VectorXcd> atom_values)
    : space_(std::move(space)),
      measure_(std::move(measure)),
      interval_coeffs_(std::move(interval_coeffs)),
      atom_values_(std::move(atom_values)) {
    if (!space_ || !measure_) {
        throw Error("FrameMap: null space or measure");
    }
    if (interval_coeffs_.size() != measure_->interval_count() ||
        atom_values_.size() != measure_->atom_count()) {
        throw Error("FrameMap: coefficients are not aligned with the measure");
    }
    const int m = space_->dim();
    for (const auto& coeffs : interval_coeffs_) {
        if (static_cast<int>(coeffs.size()) > kMaxPolyDegree + 1) {
            throw Error("FrameMap: degree exceeds cap " + std::to_string(kMaxPolyDegree));
        }
        for (const auto& c : coeffs) {
            if (c.size() != m) {
                throw Error("FrameMap: coefficient length does not match space dimension");
            }
        }
    }
    for (const auto& v : atom_values_) {
        if (v.size() != m) {
            throw Error("FrameMap: atom value length does not match space dimension");
        }
    }
}

int FrameMap::degree() const {
    int d = 0;
    for (const auto& coeffs : interval_coeffs_) {
        d = std::max(d, static_cast<int>(coeffs.size()) - 1);
    }
    return d;
}

FrameMap FrameMap::transformed(const Eigen::MatrixXcd& op) const {
    std::vector<std::vector<Eigen::VectorXcd>> coeffs = interval_coeffs_;
    for (auto& list : coeffs) {
        for (auto& c : list) {
            c = op * c;
        }
    }
    std::vector<Eigen::VectorXcd> values = atom_values_;
    for (auto& v : values) {
        v = op * v;
    }
    return FrameMap(space_, measure_, std::move(coeffs), std::move(values));
}

ModuleElement evaluate(const FrameMap& f, double w) {
    const MeasureSpace& sp = *f.measure();
    if (const auto k = sp.atom_at(w)) {
        return ModuleElement(f.space(), f.atom_value(*k));
    }
    if (const auto i = sp.interval_containing(w)) {
        const auto& coeffs = f.interval_coeffs(*i);
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(f.space()->dim());
        for (std::size_t j = coeffs.size(); j-- > 0;) {
            acc = acc * cdouble(w, 0.0) + coeffs[j];
        }
        return ModuleElement(f.space(), std::move(acc));
    }
    throw OutOfDomain("evaluate: point " + std::to_string(w) +
                      " is not in the measure's domain");
}

AlgebraPoly analysis(const FrameMap& frame, const ModuleElement& f) {
    require_same_space(frame.space(), f.space(), "analysis");
    const BlockSpec& spec = frame.space()->algebra();
    std::vector<std::vector<AlgebraElement>> coeffs(frame.interval_count());
    for (std::size_t i = 0; i < frame.interval_count(); ++i) {
        const auto& list = frame.interval_coeffs(i);
        coeffs[i].reserve(list.size());
        for (const auto& c : list) {
            coeffs[i].push_back(inner(f, ModuleElement(frame.space(), c)));
        }
    }
    std::vector<AlgebraElement> values;
    values.reserve(frame.atom_count());
    for (std::size_t k = 0; k < frame.atom_count(); ++k) {
        values.push_back(inner(f, ModuleElement(frame.space(), frame.atom_value(k))));
    }
    return AlgebraPoly(spec, std::move(coeffs), std::move(values));
}

ModuleElement synthesis(const FrameMap& frame, const AlgebraPoly& phi, double tol) {
    const ModuleSpace& space = *frame.space();
    if (phi.spec() != space.algebra()) {
        throw SpecMismatch("synthesis: coefficient algebra does not match the module");
    }
    const MeasureSpace& sp = *frame.measure();
    if (phi.interval_count() != sp.interval_count() || phi.atom_count() != sp.atom_count()) {
        throw SpecMismatch("synthesis: coefficients are not aligned with the measure");
    }

    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(space.rows(), space.cols());
    for (std::size_t i = 0; i < sp.interval_count(); ++i) {
        const auto& pc = phi.interval_coeffs(i);
        const auto& fc = frame.interval_coeffs(i);
        if (pc.empty() || fc.empty()) {
            continue;
        }
        std::vector<Eigen::MatrixXcd> pe;
        pe.reserve(pc.size());
        for (const auto& a : pc) {
            pe.push_back(a.embedded());
        }
        std::vector<Eigen::MatrixXcd> fa;
        fa.reserve(fc.size());
        for (const auto& c : fc) {
            fa.push_back(space.ambient(c));
        }
        const std::size_t top = pc.size() + fc.size() - 2;
        for (std::size_t t = 0; t <= top; ++t) {
            Eigen::MatrixXcd conv = Eigen::MatrixXcd::Zero(space.rows(), space.cols());
            for (std::size_t j = 0; j < pe.size(); ++j) {
                if (t < j || t - j >= fa.size()) {
                    continue;
                }
                conv += pe[j] * fa[t - j];
            }
            acc += moment(sp.intervals()[i], static_cast<int>(t)) * conv;
        }
    }
    for (std::size_t k = 0; k < sp.atom_count(); ++k) {
        acc += sp.atoms()[k].mass *
               (phi.atom_value(k).embedded() * space.ambient(frame.atom_value(k)));
    }
    return ModuleElement(frame.space(), space.coords(acc, tol));
}

ModuleOperator mixed_frame_operator(const FrameMap& f, const FrameMap& g, double tol) {
    require_same_space(f.space(), g.space(), "mixed_frame_operator");
    require_same_measure(f, g, "mixed_frame_operator");
    const int m = f.space()->dim();
    Eigen::MatrixXcd mat(m, m);
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
        e(i) = cdouble(1.0, 0.0);
        const ModuleElement basis_elem(f.space(), e);
        mat.col(i) = synthesis(f, analysis(g, basis_elem), tol).coords();
    }
    return ModuleOperator(f.space(), std::move(mat));
}

ModuleOperator frame_operator(const FrameMap& f, double tol) {
    return mixed_frame_operator(f, f, tol);
}

PencilBounds hermitian_pencil_bounds(const Eigen::MatrixXcd& gram, const Eigen::MatrixXcd& form,
                                     double rank_tol, double kernel_tol) {
    const Eigen::MatrixXcd g = 0.5 * (gram + gram.adjoint().eval());
    const Eigen::MatrixXcd m = 0.5 * (form + form.adjoint().eval());
    const double form_scale = std::max(1.0, m.cwiseAbs().maxCoeff());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const auto& evals = es.eigenvalues();
    const double thr = rank_tol * std::max(1.0, evals.cwiseAbs().maxCoeff());

    std::vector<Eigen::Index> range_idx;
    std::vector<Eigen::Index> kernel_idx;
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        if (evals(i) > thr) {
            range_idx.push_back(i);
        } else {
            kernel_idx.push_back(i);
        }
    }

    PencilBounds out;
    out.rank = static_cast<int>(range_idx.size());

    if (!kernel_idx.empty()) {
        Eigen::MatrixXcd v0(g.rows(), static_cast<Eigen::Index>(kernel_idx.size()));
        for (std::size_t j = 0; j < kernel_idx.size(); ++j) {
            v0.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(kernel_idx[j]);
        }
        const double leak = (m * v0).cwiseAbs().maxCoeff();
        if (leak > kernel_tol * form_scale) {
            throw KernelViolation(
                "kernel of the Gramian form is not annihilated by the operator form "
                "(magnitude " + std::to_string(leak) + "): no finite upper bound");
        }
    }

    if (range_idx.empty()) {
        out.vacuous = true;
        return out;
    }

    Eigen::MatrixXcd w(g.rows(), static_cast<Eigen::Index>(range_idx.size()));
    for (std::size_t j = 0; j < range_idx.size(); ++j) {
        w.col(static_cast<Eigen::Index>(j)) =
            es.eigenvectors().col(range_idx[j]) / std::sqrt(evals(range_idx[j]));
    }
    Eigen::MatrixXcd h = w.adjoint() * m * w;
    h = 0.5 * (h + h.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h, Eigen::EigenvaluesOnly);
    out.lower = hs.eigenvalues().minCoeff();
    out.upper = hs.eigenvalues().maxCoeff();
    return out;
}

BoundsReport frame_bounds(const FrameMap& f, const BoundsOptions& opts) {
    const ModuleSpace& space = *f.space();
    const BlockSpec& spec = space.algebra();
    const int m = space.dim();

    const BoundsStrategy strategy = opts.strategy.value_or(
        spec.commutative() ? BoundsStrategy::CommutativeExact
                           : BoundsStrategy::DirectionSampled);
    if (strategy == BoundsStrategy::CommutativeExact && !spec.commutative()) {
        throw Error("frame_bounds: commutative-exact strategy requires all blocks of size 1");
    }

    const ModuleOperator s = frame_operator(f, opts.tol);

    // Blockwise inner-product data for the basis and its image under S.
    std::vector<std::vector<AlgebraElement>> ip;   // ip[i][j] = <e_i, e_j>
    std::vector<std::vector<AlgebraElement>> sip;  // sip[i][j] = <S e_i, e_j>
    ip.reserve(static_cast<std::size_t>(m));
    sip.reserve(static_cast<std::size_t>(m));
    std::vector<ModuleElement> basis_elems;
    std::vector<ModuleElement> s_basis;
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
        e(i) = cdouble(1.0, 0.0);
        basis_elems.emplace_back(f.space(), e);
        s_basis.emplace_back(f.space(), s.matrix().col(i));
    }
    for (int i = 0; i < m; ++i) {
        std::vector<AlgebraElement> row_ip;
        std::vector<AlgebraElement> row_sip;
        for (int j = 0; j < m; ++j) {
            row_ip.push_back(inner(basis_elems[static_cast<std::size_t>(i)],
                                   basis_elems[static_cast<std::size_t>(j)]));
            row_sip.push_back(inner(s_basis[static_cast<std::size_t>(i)],
                                    basis_elems[static_cast<std::size_t>(j)]));
        }
        ip.push_back(std::move(row_ip));
        sip.push_back(std::move(row_sip));
    }

    BoundsReport report;
    report.strategy = strategy;
    report.tolerance = opts.tol;

    bool any = false;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    auto scalar_forms = [&](int k, const Eigen::VectorXcd& dir) {
        Eigen::MatrixXcd gk(m, m);
        Eigen::MatrixXcd mk(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const auto& gb = ip[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                const auto& mb = sip[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                gk(j, i) = (dir.adjoint() * gb.block(k) * dir)(0, 0);
                mk(j, i) = (dir.adjoint() * mb.block(k) * dir)(0, 0);
            }
        }
        return std::make_pair(gk, mk);
    };

    if (strategy == BoundsStrategy::CommutativeExact) {
        for (int k = 0; k < spec.block_count(); ++k) {
            Eigen::VectorXcd one(1);
            one(0) = cdouble(1.0, 0.0);
            auto [gk, mk] = scalar_forms(k, one);
            const PencilBounds pb = hermitian_pencil_bounds(gk, mk);
            if (pb.vacuous) {
                continue;
            }
            any = true;
            lo = std::min(lo, pb.lower);
            hi = std::max(hi, pb.upper);
            report.blocks.push_back({k, pb.lower, pb.upper, pb.rank});
        }
    } else {
        for (int k = 0; k < spec.block_count(); ++k) {
            const int n = spec.block_size(k);
            bool block_any = false;
            double block_lo = std::numeric_limits<double>::infinity();
            double block_hi = -std::numeric_limits<double>::infinity();
            for (int t = 0; t < opts.directions; ++t) {
                const Eigen::VectorXcd dir =
                    sphere_direction(n, static_cast<std::uint64_t>(t) + 1, opts.seed);
                auto [gk, mk] = scalar_forms(k, dir);
                const PencilBounds pb = hermitian_pencil_bounds(gk, mk);
                ++report.directions_used;
                if (pb.vacuous) {
                    continue;
                }
                block_any = true;
                block_lo = std::min(block_lo, pb.lower);
                block_hi = std::max(block_hi, pb.upper);
            }
            if (block_any) {
                any = true;
                lo = std::min(lo, block_lo);
                hi = std::max(hi, block_hi);
                report.blocks.push_back({k, block_lo, block_hi, -1});
            }
        }
    }

    if (!any) {
        throw Error("frame_bounds: all block forms vanish; the module inner product is degenerate");
    }
    report.lower = std::max(0.0, lo);
    report.upper = hi;
    return report;
}

BoundsReport require_frame_bounds(const FrameMap& f, const BoundsOptions& opts) {
    BoundsReport report = frame_bounds(f, opts);
    if (!report.is_frame()) {
        throw NotAFrame("lower frame bound " + std::to_string(report.lower) +
                        " is not above tolerance");
    }
    return report;
}

FrameMap canonical_dual(const FrameMap& f, double tol) {
    const ModuleOperator s = frame_operator(f, tol);
    const ModuleOperator sinv = s.inverse(tol);
    return f.transformed(sinv.matrix());
}

DualityReport duality_defect(const FrameMap& f, const FrameMap& g, double tol) {
    const ModuleOperator op = mixed_frame_operator(f, g, tol);
    DualityReport report;
    report.defect = op.identity_defect();
    report.tolerance = tol;
    report.is_dual = report.defect <= tol;
    return report;
}

DualLowerBoundReport dual_pair_lower_bound_check(const FrameMap& f, const FrameMap& g,
                                                 int samples, double tol, std::uint64_t seed) {
    const DualityReport dr = duality_defect(f, g, tol);
    if (!dr.is_dual) {
        throw NotDual("dual_pair_lower_bound_check: duality defect " +
                      std::to_string(dr.defect) + " exceeds tolerance");
    }
    const BoundsReport gb = frame_bounds(g, BoundsOptions{.tol = tol});

    DualLowerBoundReport report;
    report.upper_bound_g = gb.upper;
    report.implied_lower = 1.0 / gb.upper;
    report.samples = samples;

    SplitMix64 rng(seed);
    const int m = f.space()->dim();
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd coords(m);
        for (int i = 0; i < m; ++i) {
            coords(i) = cdouble(rng.symmetric(), rng.symmetric());
        }
        const ModuleElement elem(f.space(), coords);
        const AlgebraPoly af = analysis(f, elem);
        const double lhs = report.implied_lower * norm(inner(elem, elem));
        const double rhs = norm(l2_inner(af, af, *f.measure()));
        report.max_violation = std::max(report.max_violation, lhs - rhs);
    }
    report.passed = report.max_violation <= tol;
    return report;
}

}  // namespace cmf
