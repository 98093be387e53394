#include <doctest.h>

#include "cmf/frame.hpp"
#include "testutil.hpp"

using cmf::AlgebraElement;
using cmf::AlgebraPoly;
using cmf::BlockSpec;
using cmf::BoundsOptions;
using cmf::BoundsStrategy;
using cmf::cdouble;
using cmf::FrameMap;
using cmf::ModuleElement;
using cmf::ModuleOperator;

namespace {

Eigen::VectorXcd coords2(cdouble a, cdouble b) {
    Eigen::VectorXcd v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("evaluation of piecewise maps") {
    const auto diag = testutil::make_diag_pair();
    const ModuleElement at_half = cmf::evaluate(diag.f, 0.5);
    CHECK(std::abs(at_half.coords()(0) - cdouble(1.0, 0.0)) == 0.0);
    CHECK(std::abs(at_half.coords()(1) - cdouble(-0.5, 0.0)) == 0.0);

    const auto rect = testutil::make_rect_tight_pair();
    CHECK(cmf::norm(cmf::evaluate(rect.f, 0.0)) == 0.0);

    // an atom inside an interval wins over the polynomial
    auto space = testutil::scalar_row_space(1);
    auto measure = std::make_shared<const cmf::MeasureSpace>(
        std::vector<cmf::Interval>{{0.0, 1.0}}, std::vector<cmf::Atom>{{0.5, 1.0}});
    Eigen::VectorXcd one(1);
    one << cdouble(9.0, 0.0);
    Eigen::VectorXcd c0(1);
    c0 << cdouble(1.0, 0.0);
    const FrameMap f(space, measure, {{c0}}, {one});
    CHECK(cmf::evaluate(f, 0.5).coords()(0) == cdouble(9.0, 0.0));
    CHECK(cmf::evaluate(f, 0.25).coords()(0) == cdouble(1.0, 0.0));
    CHECK_THROWS_AS(cmf::evaluate(f, 3.0), cmf::OutOfDomain);
}

TEST_CASE("analysis against the identity element") {
    const auto diag = testutil::make_diag_pair();
    const ModuleElement unit(diag.space, coords2(1.0, 1.0));
    const AlgebraPoly a = cmf::analysis(diag.f, unit);
    REQUIRE(a.interval_coeffs(0).size() == 2);
    CHECK(cmf::norm(a.interval_coeffs(0)[0] -
                    AlgebraElement::diagonal(BlockSpec({1, 1}), {0.0, -1.0})) <= 1e-14);
    CHECK(cmf::norm(a.interval_coeffs(0)[1] -
                    AlgebraElement::diagonal(BlockSpec({1, 1}), {2.0, 1.0})) <= 1e-14);

    const AlgebraPoly z = cmf::analysis(diag.f, ModuleElement::zero(diag.space));
    CHECK(cmf::norm(cmf::integrate(z, *diag.measure)) == 0.0);
}

TEST_CASE("synthesis by exact moments") {
    const auto diag = testutil::make_diag_pair();
    const BlockSpec spec({1, 1});
    // phi(w) = diag(w, w): integral of diag(2w^2, w^2 - w) = diag(2/3, -1/6)
    const AlgebraPoly phi(spec,
                          {{AlgebraElement::zero(spec), AlgebraElement::identity(spec)}},
                          {});
    const ModuleElement r = cmf::synthesis(diag.f, phi);
    CHECK(std::abs(r.coords()(0) - cdouble(2.0 / 3.0, 0.0)) <= 1e-14);
    CHECK(std::abs(r.coords()(1) - cdouble(-1.0 / 6.0, 0.0)) <= 1e-14);

    const AlgebraPoly zero = AlgebraPoly::zero(spec, 1, 0);
    CHECK(cmf::norm(cmf::synthesis(diag.f, zero)) == 0.0);
}

TEST_CASE("analysis and synthesis are adjoint") {
    testutil::Rng rng(61);
    const auto diag = testutil::make_diag_pair();
    const BlockSpec spec({1, 1});
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<AlgebraElement> coeffs;
        for (int j = 0; j < 3; ++j) {
            coeffs.push_back(testutil::random_algebra(rng, spec));
        }
        const AlgebraPoly phi(spec, {coeffs}, {});
        const ModuleElement f = testutil::random_element(rng, diag.space);
        const AlgebraElement lhs = cmf::inner(cmf::synthesis(diag.f, phi), f);
        const AlgebraElement rhs =
            cmf::l2_inner(phi, cmf::analysis(diag.f, f), *diag.measure);
        CHECK(cmf::norm(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("frame operator of the reference pairs") {
    const auto diag = testutil::make_diag_pair();
    const ModuleOperator s = cmf::frame_operator(diag.f);
    CHECK(std::abs(s.matrix()(0, 0) - cdouble(4.0 / 3.0, 0.0)) <= 1e-14);
    CHECK(std::abs(s.matrix()(1, 1) - cdouble(1.0 / 3.0, 0.0)) <= 1e-14);
    CHECK(std::abs(s.matrix()(0, 1)) <= 1e-15);
    CHECK(std::abs(s.matrix()(1, 0)) <= 1e-15);

    const auto rect = testutil::make_rect_tight_pair();
    const ModuleOperator s2 = cmf::frame_operator(rect.f);
    CHECK((s2.matrix() - (4.0 / 3.0) * Eigen::MatrixXcd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);

    const FrameMap single = testutil::single_atom_unit();
    CHECK(cmf::frame_operator(single).identity_defect() <= 1e-15);
}

TEST_CASE("frame operator is self-adjoint and positive") {
    testutil::Rng rng(67);
    for (int trial = 0; trial < 25; ++trial) {
        const FrameMap frame = testutil::random_atomic_frame(rng);
        const auto space = frame.space();
        const ModuleOperator s = cmf::frame_operator(frame);
        const int m = space->dim();
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXcd ei = Eigen::VectorXcd::Zero(m);
            ei(i) = 1.0;
            const ModuleElement e_i(space, ei);
            for (int j = 0; j < m; ++j) {
                Eigen::VectorXcd ej = Eigen::VectorXcd::Zero(m);
                ej(j) = 1.0;
                const ModuleElement e_j(space, ej);
                CHECK(cmf::norm(cmf::inner(s.apply(e_i), e_j) -
                                cmf::inner(e_i, s.apply(e_j))) <= 1e-10);
            }
        }
        const ModuleElement f = testutil::random_element(rng, space);
        CHECK(cmf::is_positive(cmf::inner(s.apply(f), f), 1e-10));
    }
}

TEST_CASE("analysis norm equals the frame-operator form") {
    testutil::Rng rng(71);
    const auto diag = testutil::make_diag_pair();
    const ModuleOperator s = cmf::frame_operator(diag.f);
    for (int trial = 0; trial < 50; ++trial) {
        const ModuleElement f = testutil::random_element(rng, diag.space);
        const AlgebraPoly af = cmf::analysis(diag.f, f);
        const AlgebraElement lhs = cmf::l2_inner(af, af, *diag.measure);
        const AlgebraElement rhs = cmf::inner(s.apply(f), f);
        CHECK(cmf::norm(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("tight bounds of the reference pairs") {
    const auto rect = testutil::make_rect_tight_pair();
    const auto bf = cmf::frame_bounds(rect.f);
    CHECK(bf.strategy == BoundsStrategy::CommutativeExact);
    CHECK(std::abs(bf.lower - 4.0 / 3.0) <= 1e-12);
    CHECK(std::abs(bf.upper - 4.0 / 3.0) <= 1e-12);
    const auto bg = cmf::frame_bounds(rect.g);
    CHECK(std::abs(bg.lower - 0.75) <= 1e-12);
    CHECK(std::abs(bg.upper - 0.75) <= 1e-12);

    const auto diag = testutil::make_diag_pair();
    const auto df = cmf::frame_bounds(diag.f);
    CHECK(std::abs(df.lower - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(df.upper - 4.0 / 3.0) <= 1e-12);
    const auto dg = cmf::frame_bounds(diag.g);
    CHECK(std::abs(dg.lower - 0.75) <= 1e-12);
    CHECK(std::abs(dg.upper - 31.0 / 9.0) <= 1e-12);

    const auto single = cmf::frame_bounds(testutil::single_atom_unit());
    CHECK(std::abs(single.lower - 1.0) <= 1e-14);
    CHECK(std::abs(single.upper - 1.0) <= 1e-14);
}

TEST_CASE("bounds agree with the atomic brute-force oracle") {
    testutil::Rng rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        const FrameMap frame = testutil::random_atomic_frame(rng);
        const auto ours = cmf::frame_bounds(frame);
        const auto oracle = testutil::atomic_bounds_oracle(frame);
        CHECK(std::abs(ours.lower - oracle.lower) <= 1e-8);
        CHECK(std::abs(ours.upper - oracle.upper) <= 1e-8);
    }
}

TEST_CASE("direction sampling matches the exact strategy on commutative input") {
    const auto diag = testutil::make_diag_pair();
    BoundsOptions opts;
    opts.strategy = BoundsStrategy::DirectionSampled;
    opts.directions = 512;
    const auto sampled = cmf::frame_bounds(diag.f, opts);
    const auto exact = cmf::frame_bounds(diag.f);
    CHECK(sampled.strategy == BoundsStrategy::DirectionSampled);
    CHECK(sampled.directions_used == 1024);
    CHECK(std::abs(sampled.lower - exact.lower) <= 1e-6);
    CHECK(std::abs(sampled.upper - exact.upper) <= 1e-6);
}

TEST_CASE("direction sampling handles a full matrix block") {
    // U = all 2x2 matrices over the full 2x2 algebra; a single unit atom at
    // the identity gives S = I.
    const BlockSpec spec({2});
    std::vector<Eigen::MatrixXcd> basis;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(2, 2);
            e(r, c) = 1.0;
            basis.push_back(e);
        }
    }
    auto space = std::make_shared<const cmf::ModuleSpace>(spec, 2, 2, std::move(basis));
    CHECK(cmf::validate(*space).valid());
    auto measure = std::make_shared<const cmf::MeasureSpace>(
        std::vector<cmf::Interval>{}, std::vector<cmf::Atom>{{0.0, 1.0}});
    Eigen::VectorXcd id_coords(4);
    id_coords << 1.0, 0.0, 0.0, 1.0;
    const FrameMap f(space, measure, {}, {id_coords});

    const auto report = cmf::frame_bounds(f, BoundsOptions{.directions = 64});
    CHECK(report.strategy == BoundsStrategy::DirectionSampled);
    CHECK(std::abs(report.lower - 1.0) <= 1e-9);
    CHECK(std::abs(report.upper - 1.0) <= 1e-9);

    // exact strategy is reserved for commutative algebras
    BoundsOptions bad;
    bad.strategy = BoundsStrategy::CommutativeExact;
    CHECK_THROWS_AS(cmf::frame_bounds(f, bad), cmf::Error);
}

TEST_CASE("pencil solver flags kernel violations and vacuous blocks") {
    Eigen::MatrixXcd gram(2, 2);
    gram << 1.0, 0.0, 0.0, 0.0;
    Eigen::MatrixXcd form = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(cmf::hermitian_pencil_bounds(gram, form), cmf::KernelViolation);

    const auto ok = cmf::hermitian_pencil_bounds(gram, 2.0 * gram);
    CHECK(ok.rank == 1);
    CHECK(std::abs(ok.lower - 2.0) <= 1e-12);

    const auto vac = cmf::hermitian_pencil_bounds(Eigen::MatrixXcd::Zero(2, 2),
                                                  Eigen::MatrixXcd::Zero(2, 2));
    CHECK(vac.vacuous);
}

TEST_CASE("frame sandwich on random elements") {
    testutil::Rng rng(79);
    const auto cases = {testutil::make_rect_tight_pair().f, testutil::make_diag_pair().f,
                        testutil::make_diag_pair().g};
    for (const FrameMap& frame : cases) {
        const auto bounds = cmf::frame_bounds(frame);
        const ModuleOperator s = cmf::frame_operator(frame);
        for (int trial = 0; trial < 200; ++trial) {
            const ModuleElement f = testutil::random_element(rng, frame.space());
            const AlgebraElement ff = cmf::inner(f, f);
            const AlgebraElement sff = cmf::inner(s.apply(f), f);
            CHECK(cmf::is_positive(sff - ff * cdouble(bounds.lower, 0.0), 1e-8));
            CHECK(cmf::is_positive(ff * cdouble(bounds.upper, 0.0) - sff, 1e-8));
        }
    }
}

TEST_CASE("canonical duals of the reference pairs") {
    const auto diag = testutil::make_diag_pair();
    const FrameMap dual = cmf::canonical_dual(diag.f);
    REQUIRE(dual.interval_coeffs(0).size() == 2);
    CHECK((dual.interval_coeffs(0)[0] - coords2(0.0, -3.0)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((dual.interval_coeffs(0)[1] - coords2(1.5, 3.0)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(cmf::duality_defect(diag.f, dual).defect <= 1e-12);

    // the tight pair's canonical dual is the printed partner map
    const auto rect = testutil::make_rect_tight_pair();
    const FrameMap rdual = cmf::canonical_dual(rect.f);
    CHECK((rdual.interval_coeffs(0)[1] - coords2(1.5, 1.5)).cwiseAbs().maxCoeff() <= 1e-12);

    // tight frames invert by the scalar
    const FrameMap single = testutil::single_atom_unit();
    const FrameMap sdual = cmf::canonical_dual(single);
    CHECK(std::abs(sdual.atom_value(0)(0) - cdouble(1.0, 0.0)) <= 1e-14);
}

TEST_CASE("duality defects of the reference pairs") {
    const auto diag = testutil::make_diag_pair();
    const auto dd = cmf::duality_defect(diag.f, diag.g);
    CHECK(dd.defect <= 1e-12);
    CHECK(dd.is_dual);

    const auto rect = testutil::make_rect_tight_pair();
    CHECK(cmf::duality_defect(rect.f, rect.g).defect <= 1e-12);

    // (F, F) for the tight pair: T_F T_F^* = (4/3) I, defect 1/3
    const auto self = cmf::duality_defect(rect.f, rect.f);
    CHECK(std::abs(self.defect - 1.0 / 3.0) <= 1e-12);
    CHECK_FALSE(self.is_dual);
}

TEST_CASE("reconstruction through the canonical dual") {
    testutil::Rng rng(83);
    const auto diag = testutil::make_diag_pair();
    const FrameMap dual = cmf::canonical_dual(diag.f);
    for (int trial = 0; trial < 200; ++trial) {
        const ModuleElement f = testutil::random_element(rng, diag.space);
        const ModuleElement back = cmf::synthesis(diag.f, cmf::analysis(dual, f));
        CHECK(cmf::norm(back - f) <= 1e-9);
    }
}

TEST_CASE("dual pairs certify the lower bound") {
    const auto diag = testutil::make_diag_pair();
    const auto r1 = cmf::dual_pair_lower_bound_check(diag.f, diag.g, 64);
    CHECK(std::abs(r1.upper_bound_g - 31.0 / 9.0) <= 1e-10);
    CHECK(r1.passed);

    // tightness makes the bound an equality
    const auto rect = testutil::make_rect_tight_pair();
    const auto r2 = cmf::dual_pair_lower_bound_check(rect.f, rect.g, 64);
    CHECK(std::abs(r2.implied_lower - 4.0 / 3.0) <= 1e-10);
    CHECK(r2.passed);
    CHECK(r2.max_violation <= 1e-10);

    // canonical duals of random atomic frames pass as well
    testutil::Rng rng(89);
    for (int trial = 0; trial < 10; ++trial) {
        const FrameMap frame = testutil::random_atomic_frame(rng);
        const FrameMap dual = cmf::canonical_dual(frame);
        CHECK(cmf::dual_pair_lower_bound_check(frame, dual, 32).passed);
    }

    CHECK_THROWS_AS(cmf::dual_pair_lower_bound_check(rect.f, rect.f, 8), cmf::NotDual);
}

TEST_CASE("bessel-only maps report a zero lower bound") {
    // one atom in a two-dimensional module spans only half the space
    const FrameMap frame = testutil::orthogonal_pair_atoms();
    auto measure = std::make_shared<const cmf::MeasureSpace>(
        std::vector<cmf::Interval>{}, std::vector<cmf::Atom>{{0.0, 1.0}});
    Eigen::VectorXcd v(2);
    v << 1.0, 0.0;
    const FrameMap bessel(frame.space(), measure, {}, {v});
    const auto report = cmf::frame_bounds(bessel);
    CHECK(report.lower <= 1e-12);
    CHECK(report.upper >= 1.0 - 1e-12);
    CHECK_FALSE(report.is_frame());
    CHECK_THROWS_AS(cmf::require_frame_bounds(bessel), cmf::NotAFrame);
}
