#include <doctest.h>

#include <string>

#include "cmf/descriptor.hpp"
#include "testutil.hpp"

using cmf::Descriptor;
using cmf::cdouble;

namespace {

std::string data_path(const char* name) {
    return std::string(CMF_DATA_DIR) + "/" + name;
}

// minimal valid descriptor used as a template for error cases
const char* kMinimal = R"({
  "algebra": { "block_sizes": [1] },
  "module": { "rows": 1, "cols": 1, "basis": [ [ [[1, 0]] ] ] },
  "measure": { "intervals": [], "atoms": [ { "point": 0, "mass": 1 } ] },
  "frames": { "F": { "intervals": [], "atoms": [ [[1, 0]] ] } }
})";

}  // namespace

TEST_CASE("shipped corpus loads and matches the reference pairs") {
    const Descriptor d = cmf::load_descriptor(data_path("example_2_7.json"));
    CHECK(d.space->dim() == 2);
    CHECK(d.measure->interval_count() == 1);
    CHECK(d.frames.size() == 2);

    const auto bounds = cmf::frame_bounds(d.frame("F"), d.bounds_options());
    CHECK(std::abs(bounds.lower - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(bounds.upper - 4.0 / 3.0) <= 1e-12);
    CHECK(cmf::duality_defect(d.frame("F"), d.frame("G")).defect <= 1e-12);

    const Descriptor d6 = cmf::load_descriptor(data_path("example_2_6.json"));
    CHECK(std::abs(cmf::frame_bounds(d6.frame("F")).lower - 4.0 / 3.0) <= 1e-12);
    CHECK(std::abs(cmf::frame_bounds(d6.frame("G")).upper - 0.75) <= 1e-12);

    CHECK_THROWS_AS(d.frame("H"), cmf::Error);
}

TEST_CASE("load, serialize, and reload are identical in memory") {
    for (const char* name :
         {"example_2_6.json", "example_2_7.json", "atomic_two_unit.json"}) {
        const Descriptor a = cmf::load_descriptor(data_path(name));
        const Descriptor b = cmf::parse_descriptor(serialize_descriptor(a), name);
        CHECK(a.space->algebra() == b.space->algebra());
        REQUIRE(a.space->dim() == b.space->dim());
        for (int i = 0; i < a.space->dim(); ++i) {
            CHECK((a.space->basis(i).array() == b.space->basis(i).array()).all());
        }
        REQUIRE(a.measure->interval_count() == b.measure->interval_count());
        for (std::size_t i = 0; i < a.measure->interval_count(); ++i) {
            CHECK(a.measure->intervals()[i].lo == b.measure->intervals()[i].lo);
            CHECK(a.measure->intervals()[i].hi == b.measure->intervals()[i].hi);
        }
        REQUIRE(a.frames.size() == b.frames.size());
        for (const auto& [fname, fa] : a.frames) {
            const cmf::FrameMap& fb = b.frame(fname);
            REQUIRE(fa.interval_count() == fb.interval_count());
            for (std::size_t i = 0; i < fa.interval_count(); ++i) {
                REQUIRE(fa.interval_coeffs(i).size() == fb.interval_coeffs(i).size());
                for (std::size_t j = 0; j < fa.interval_coeffs(i).size(); ++j) {
                    CHECK((fa.interval_coeffs(i)[j].array() ==
                           fb.interval_coeffs(i)[j].array())
                              .all());
                }
            }
            for (std::size_t k = 0; k < fa.atom_count(); ++k) {
                CHECK((fa.atom_value(k).array() == fb.atom_value(k).array()).all());
            }
        }
        CHECK(a.options.tol == b.options.tol);
        CHECK(a.options.directions == b.options.directions);
        CHECK(a.options.seed == b.options.seed);
        CHECK(a.options.strategy == b.options.strategy);
    }
}

TEST_CASE("serialization is deterministic") {
    const Descriptor a = cmf::load_descriptor(data_path("example_2_6.json"));
    CHECK(serialize_descriptor(a) == serialize_descriptor(a));
}

TEST_CASE("malformed json reports line context") {
    CHECK_THROWS_WITH_AS(cmf::parse_descriptor("{\n  \"algebra\": [,]\n}", "bad"),
                         doctest::Contains("line 2"), cmf::ParseError);
}

TEST_CASE("malformed complex entries are rejected") {
    std::string text = kMinimal;
    const auto pos = text.find("[[1, 0]] ] ] },");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 8, "[[1]] ");
    CHECK_THROWS_WITH_AS(cmf::parse_descriptor(text, "bad"),
                         doctest::Contains("complex entry"), cmf::ParseError);
}

TEST_CASE("unknown fields are rejected everywhere") {
    std::string text(kMinimal);
    text.insert(1, "\"extra\": 1,");
    CHECK_THROWS_WITH_AS(cmf::parse_descriptor(text, "bad"),
                         doctest::Contains("unknown field 'extra'"), cmf::ParseError);

    std::string text2(kMinimal);
    const auto pos = text2.find("\"rows\"");
    REQUIRE(pos != std::string::npos);
    text2.insert(pos, "\"shape\": 1, ");
    CHECK_THROWS_AS(cmf::parse_descriptor(text2, "bad"), cmf::ParseError);
}

TEST_CASE("axiom violations surface as validation failures") {
    // duplicated basis element: dependent basis
    const char* text = R"({
      "algebra": { "block_sizes": [1] },
      "module": { "rows": 1, "cols": 2,
                  "basis": [ [ [[1, 0], [0, 0]] ], [ [[1, 0], [0, 0]] ] ] },
      "measure": { "intervals": [], "atoms": [ { "point": 0, "mass": 1 } ] },
      "frames": { "F": { "intervals": [], "atoms": [ [[1, 0], [0, 0]] ] } }
    })";
    CHECK_THROWS_AS(cmf::parse_descriptor(text, "bad"), cmf::ValidationFailure);
}

TEST_CASE("frame shape mismatches are parse errors") {
    std::string text(kMinimal);
    const auto pos = text.find("\"atoms\": [ [[1, 0]] ] }");
    REQUIRE(pos != std::string::npos);
    std::string t2 = text;
    t2.replace(pos, 23, "\"atoms\": [] }");
    CHECK_THROWS_AS(cmf::parse_descriptor(t2, "bad"), cmf::ParseError);
}

TEST_CASE("measure inconsistencies are parse errors") {
    const char* text = R"({
      "algebra": { "block_sizes": [1] },
      "module": { "rows": 1, "cols": 1, "basis": [ [ [[1, 0]] ] ] },
      "measure": { "intervals": [], "atoms": [ { "point": 0, "mass": -1 } ] },
      "frames": { "F": { "intervals": [], "atoms": [ [[1, 0]] ] } }
    })";
    CHECK_THROWS_AS(cmf::parse_descriptor(text, "bad"), cmf::ParseError);
}

TEST_CASE("options parse and override") {
    std::string text(kMinimal);
    text.insert(text.rfind('}'),
                R"(, "options": { "tol": 1e-9, "strategy": "direction-sampled",
                                "directions": 64, "seed": 7 })");
    const Descriptor d = cmf::parse_descriptor(text, "opts");
    CHECK(d.options.tol == 1e-9);
    CHECK(d.options.strategy == cmf::BoundsStrategy::DirectionSampled);
    CHECK(d.options.directions == 64);
    CHECK(d.options.seed == 7);

    const Descriptor o = cmf::parse_descriptor(text, "opts", 1e-8);
    CHECK(o.options.tol == 1e-8);

    std::string bad(kMinimal);
    bad.insert(bad.rfind('}'), R"(, "options": { "strategy": "fast" })");
    CHECK_THROWS_AS(cmf::parse_descriptor(bad, "opts"), cmf::ParseError);
}
