#include <doctest.h>

#include "cmf/measure.hpp"
#include "testutil.hpp"

using cmf::AlgebraElement;
using cmf::AlgebraPoly;
using cmf::Atom;
using cmf::BlockSpec;
using cmf::cdouble;
using cmf::Interval;
using cmf::MeasureSpace;

namespace {

const BlockSpec kDiag({1, 1});
const BlockSpec kScalar({1});

AlgebraElement diag2(cdouble a, cdouble b) {
    return AlgebraElement::diagonal(kDiag, {a, b});
}

AlgebraElement scalar(cdouble a) {
    return AlgebraElement::diagonal(kScalar, {a});
}

}  // namespace

TEST_CASE("measure invariants") {
    CHECK_THROWS_AS(MeasureSpace({{1.0, 0.0}}, {}), cmf::Error);
    CHECK_THROWS_AS(MeasureSpace({{0.0, 1.0}, {0.5, 2.0}}, {}), cmf::Error);
    CHECK_THROWS_AS(MeasureSpace({}, {{0.0, 1.0}, {0.0, 2.0}}), cmf::Error);
    CHECK_THROWS_AS(MeasureSpace({}, {{0.0, 0.0}}), cmf::Error);
    // touching endpoints are fine
    CHECK_NOTHROW(MeasureSpace({{0.0, 1.0}, {1.0, 2.0}}, {}));
}

TEST_CASE("moments have their closed forms") {
    CHECK(cmf::moment({0.0, 1.0}, 2) == 1.0 / 3.0);
    CHECK(cmf::moment({0.0, 1.0}, 0) == 1.0);
    CHECK(cmf::moment({2.0, 3.0}, 1) == 2.5);
}

TEST_CASE("integration of a matrix polynomial") {
    const MeasureSpace sp({{0.0, 1.0}}, {});
    // P(w) = diag(3w^2, 1)
    const AlgebraPoly p(kDiag,
                        {{diag2(0.0, 1.0), diag2(0.0, 0.0), diag2(3.0, 0.0)}}, {});
    const AlgebraElement r = cmf::integrate(p, sp);
    CHECK(std::abs(r.block(0)(0, 0) - cdouble(1.0, 0.0)) <= 1e-14);
    CHECK(std::abs(r.block(1)(0, 0) - cdouble(1.0, 0.0)) <= 1e-14);

    const AlgebraPoly zero = AlgebraPoly::zero(kDiag, 1, 0);
    CHECK(cmf::norm(cmf::integrate(zero, sp)) == 0.0);
}

TEST_CASE("atom masses enter and leave the integral") {
    const MeasureSpace sp({}, {{0.5, 2.0}});
    const AlgebraPoly p(kScalar, {}, {scalar(1.0)});
    CHECK(cmf::norm(cmf::integrate(p, sp, {0})) == 0.0);
    const AlgebraElement r = cmf::integrate(p, sp);
    CHECK(r.block(0)(0, 0) == cdouble(2.0, 0.0));
}

TEST_CASE("l2 inner products") {
    const MeasureSpace sp({{0.0, 1.0}}, {});
    const AlgebraPoly one(kScalar, {{scalar(1.0)}}, {});
    CHECK(std::abs(cmf::l2_inner(one, one, sp).block(0)(0, 0) - cdouble(1.0, 0.0)) <= 1e-15);

    // P = Q = diag(2w, w - 1): integral of diag(4w^2, (w-1)^2) is diag(4/3, 1/3)
    const AlgebraPoly p(kDiag, {{diag2(0.0, -1.0), diag2(2.0, 1.0)}}, {});
    const AlgebraElement r = cmf::l2_inner(p, p, sp);
    CHECK(std::abs(r.block(0)(0, 0) - cdouble(4.0 / 3.0, 0.0)) <= 1e-14);
    CHECK(std::abs(r.block(1)(0, 0) - cdouble(1.0 / 3.0, 0.0)) <= 1e-14);

    // P = diag(3w, 0): integral of 9w^2 is 3
    const AlgebraPoly q(kDiag, {{diag2(0.0, 0.0), diag2(3.0, 0.0)}}, {});
    const AlgebraElement rr = cmf::l2_inner(q, q, sp);
    CHECK(std::abs(rr.block(0)(0, 0) - cdouble(3.0, 0.0)) <= 1e-14);
    CHECK(std::abs(rr.block(1)(0, 0)) == 0.0);
}

TEST_CASE("linearity of integration") {
    testutil::Rng rng(53);
    const MeasureSpace sp({{0.0, 1.0}, {2.0, 2.5}}, {{3.0, 0.7}});
    auto random_poly = [&](int degree) {
        std::vector<std::vector<AlgebraElement>> coeffs(2);
        for (auto& list : coeffs) {
            for (int j = 0; j <= degree; ++j) {
                list.push_back(testutil::random_algebra(rng, kDiag));
            }
        }
        return AlgebraPoly(kDiag, std::move(coeffs),
                           {testutil::random_algebra(rng, kDiag)});
    };
    for (int trial = 0; trial < 25; ++trial) {
        const AlgebraPoly p = random_poly(3);
        const AlgebraPoly q = random_poly(3);
        const cdouble s{rng.sym(), rng.sym()};
        const AlgebraElement lhs = cmf::integrate(p * s + q, sp);
        const AlgebraElement rhs = cmf::integrate(p, sp) * s + cmf::integrate(q, sp);
        CHECK(cmf::norm(lhs - rhs) <= 1e-12);
        CHECK(cmf::is_positive(cmf::l2_inner(p, p, sp), 1e-10));
    }
}

TEST_CASE("excluding the last atom splits the integral bit-exactly") {
    testutil::Rng rng(59);
    const MeasureSpace sp({{0.0, 1.0}}, {{2.0, 0.5}, {3.0, 1.25}});
    std::vector<std::vector<AlgebraElement>> coeffs(1);
    for (int j = 0; j < 3; ++j) {
        coeffs[0].push_back(testutil::random_algebra(rng, kDiag));
    }
    const AlgebraPoly p(kDiag, std::move(coeffs),
                        {testutil::random_algebra(rng, kDiag),
                         testutil::random_algebra(rng, kDiag)});
    const AlgebraElement full = cmf::integrate(p, sp);
    AlgebraElement split = cmf::integrate(p, sp, {1});
    split += p.atom_value(1) * cdouble(sp.atoms()[1].mass, 0.0);
    for (int k = 0; k < kDiag.block_count(); ++k) {
        CHECK((full.block(k).array() == split.block(k).array()).all());
    }
}

TEST_CASE("degree bookkeeping against an enumeration oracle") {
    const MeasureSpace sp({{0.0, 1.0}}, {});
    std::vector<AlgebraElement> pc;
    std::vector<AlgebraElement> qc;
    for (int j = 0; j <= 3; ++j) {
        pc.push_back(scalar(cdouble(j + 1.0, 0.5 * j)));
    }
    for (int k = 0; k <= 2; ++k) {
        qc.push_back(scalar(cdouble(2.0 * k - 1.0, -0.25 * k)));
    }
    cdouble expected(0.0, 0.0);
    for (std::size_t j = 0; j < pc.size(); ++j) {
        for (std::size_t k = 0; k < qc.size(); ++k) {
            expected += pc[j].block(0)(0, 0) * std::conj(qc[k].block(0)(0, 0)) /
                        cdouble(static_cast<double>(j + k + 1), 0.0);
        }
    }
    const AlgebraPoly p(kScalar, {pc}, {});
    const AlgebraPoly q(kScalar, {qc}, {});
    CHECK(std::abs(cmf::l2_inner(p, q, sp).block(0)(0, 0) - expected) <= 1e-13);
}

TEST_CASE("pointwise evaluation prefers atoms") {
    const MeasureSpace sp({{0.0, 1.0}}, {{0.5, 1.0}});
    const AlgebraPoly p(kScalar, {{scalar(0.0), scalar(2.0)}}, {scalar(9.0)});
    CHECK(cmf::eval(p, sp, 0.25).block(0)(0, 0) == cdouble(0.5, 0.0));
    CHECK(cmf::eval(p, sp, 0.5).block(0)(0, 0) == cdouble(9.0, 0.0));
    CHECK_THROWS_AS(cmf::eval(p, sp, 2.0), cmf::OutOfDomain);
}

TEST_CASE("alignment mismatches are rejected") {
    const MeasureSpace sp({{0.0, 1.0}}, {});
    const AlgebraPoly p = AlgebraPoly::zero(kScalar, 2, 0);
    CHECK_THROWS_AS(cmf::integrate(p, sp), cmf::SpecMismatch);
}
