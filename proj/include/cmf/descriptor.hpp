#ifndef CMF_DESCRIPTOR_HPP
#define CMF_DESCRIPTOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cmf/frame.hpp"

namespace cmf {

/// Tolerances and strategy knobs carried by a descriptor file; command-line
/// flags override them.
struct Options {
    double tol = kDefaultTol;
    std::optional<BoundsStrategy> strategy;  // nullopt = auto
    int directions = 512;
    std::uint64_t seed = 12345;
};

/// In-memory form of a descriptor file: one algebra, one module space, one
/// measure, and named frame maps over them.
struct Descriptor {
    SpacePtr space;
    MeasurePtr measure;
    std::map<std::string, FrameMap> frames;
    Options options;

    const FrameMap& frame(const std::string& name) const;
    BoundsOptions bounds_options() const;
};

/// Parses and validates a descriptor. Structural problems (malformed JSON,
/// wrong shapes, unknown fields) throw ParseError; module-axiom failures
/// throw ValidationFailure. `tol_override` replaces the descriptor's own
/// tolerance before validation.
Descriptor load_descriptor(const std::string& path,
                           std::optional<double> tol_override = std::nullopt);
Descriptor parse_descriptor(const std::string& text, const std::string& origin,
                            std::optional<double> tol_override = std::nullopt);

std::string serialize_descriptor(const Descriptor& d);
void save_descriptor(const Descriptor& d, const std::string& path);

}  // namespace cmf

#endif  // CMF_DESCRIPTOR_HPP
