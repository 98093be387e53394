// Command-line surface for the cmf library: loads a JSON descriptor of an
// algebra, module, measure, and named frame maps, runs the requested
// analysis, and prints a deterministic report (text or --json).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmf/descriptor.hpp"
#include "cmf/exactness.hpp"

namespace {

using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInvalid = 2,
    kParse = 3,
    kNotAFrame = 4,
    kKernelViolation = 5,
    kNotDual = 6,
    kSingular = 7,
    kOutOfDomain = 8,
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_hex(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

std::string fmt(const cmf::cdouble& z) {
    return "(" + fmt(z.real()) + "," + fmt(z.imag()) + ")";
}

std::string fmt(const cmf::AlgebraElement& a) {
    std::string out;
    for (int k = 0; k < a.block_count(); ++k) {
        if (k > 0) {
            out += " | ";
        }
        out += "[";
        const auto& b = a.block(k);
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            if (r > 0) {
                out += "; ";
            }
            for (Eigen::Index c = 0; c < b.cols(); ++c) {
                if (c > 0) {
                    out += ", ";
                }
                out += fmt(b(r, c));
            }
        }
        out += "]";
    }
    return out;
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

const char* strategy_name(cmf::BoundsStrategy s) {
    return s == cmf::BoundsStrategy::CommutativeExact ? "commutative-exact"
                                                      : "direction-sampled";
}

const char* verdict_name(cmf::RemovalVerdict v) {
    switch (v) {
        case cmf::RemovalVerdict::NotFrame:
            return "NotFrame";
        case cmf::RemovalVerdict::FrameWithBound:
            return "FrameWithBound";
        default:
            return "MeasureZeroTrivial";
    }
}

struct GlobalFlags {
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    bool json = false;
};

cmf::BoundsOptions effective_bounds(const cmf::Descriptor& d, const GlobalFlags& g,
                                    const std::string& strategy_flag, int directions_flag) {
    cmf::BoundsOptions opts = d.bounds_options();
    if (g.seed) {
        opts.seed = *g.seed;
    }
    if (strategy_flag == "commutative-exact") {
        opts.strategy = cmf::BoundsStrategy::CommutativeExact;
    } else if (strategy_flag == "direction-sampled") {
        opts.strategy = cmf::BoundsStrategy::DirectionSampled;
    } else if (strategy_flag == "auto") {
        opts.strategy = std::nullopt;
    }
    if (directions_flag > 0) {
        opts.directions = directions_flag;
    }
    return opts;
}

void put_number(json& j, const std::string& key, double value) {
    j[key] = value;
    j[key + "_hex"] = fmt_hex(value);
}

int run_validate(const std::string& path, const GlobalFlags& g) {
    try {
        cmf::load_descriptor(path, g.tol);
    } catch (const cmf::ValidationFailure& e) {
        if (g.json) {
            json j{{"valid", false}, {"issue", e.report().issues.front().detail}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "INVALID: " << e.report().issues.front().detail << "\n";
        }
        return kInvalid;
    }
    if (g.json) {
        std::cout << json{{"valid", true}}.dump(2) << "\n";
    } else {
        std::cout << "VALID\n";
    }
    return kOk;
}

int run_bounds(const std::string& path, const std::string& name, const GlobalFlags& g,
               const std::string& strategy_flag, int directions_flag) {
    const cmf::Descriptor d = cmf::load_descriptor(path, g.tol);
    const cmf::BoundsOptions opts = effective_bounds(d, g, strategy_flag, directions_flag);
    const cmf::BoundsReport report = cmf::frame_bounds(d.frame(name), opts);
    if (g.json) {
        json j;
        j["frame"] = name;
        j["strategy"] = strategy_name(report.strategy);
        j["directions"] = report.directions_used;
        put_number(j, "A", report.lower);
        put_number(j, "B", report.upper);
        j["tight"] = report.tight();
        j["is_frame"] = report.is_frame();
        json blocks = json::array();
        for (const auto& b : report.blocks) {
            json jb{{"block", b.block}, {"min", b.lower}, {"max", b.upper}};
            if (b.rank >= 0) {
                jb["rank"] = b.rank;
            }
            blocks.push_back(jb);
        }
        j["blocks"] = blocks;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "frame: " << name << "\n";
        std::cout << "strategy: " << strategy_name(report.strategy) << "\n";
        std::cout << "directions: " << report.directions_used << "\n";
        std::cout << "A: " << fmt(report.lower) << "\n";
        std::cout << "B: " << fmt(report.upper) << "\n";
        std::cout << "tight: " << yesno(report.tight()) << "\n";
        for (const auto& b : report.blocks) {
            std::cout << "block " << b.block << ": ";
            if (b.rank >= 0) {
                std::cout << "rank " << b.rank << ", ";
            } else {
                std::cout << "sampled, ";
            }
            std::cout << "min " << fmt(b.lower) << ", max " << fmt(b.upper) << "\n";
        }
    }
    if (!report.is_frame()) {
        std::cerr << "error: not a frame (lower bound <= tolerance)\n";
        return kNotAFrame;
    }
    return kOk;
}

int run_dual(const std::string& path, const std::string& name, const std::string& out,
             const GlobalFlags& g) {
    cmf::Descriptor d = cmf::load_descriptor(path, g.tol);
    const cmf::FrameMap& frame = d.frame(name);
    const cmf::FrameMap dual = cmf::canonical_dual(frame, d.options.tol);
    const cmf::DualityReport dr = cmf::duality_defect(frame, dual, d.options.tol);
    const std::string dual_name = name + "_dual";
    d.frames.insert_or_assign(dual_name, dual);
    cmf::save_descriptor(d, out);
    const std::string base = std::filesystem::path(out).filename().string();
    if (g.json) {
        json j{{"frame", name}, {"dual", dual_name}, {"wrote", base}};
        put_number(j, "defect", dr.defect);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "frame: " << name << "\n";
        std::cout << "dual: " << dual_name << "\n";
        std::cout << "defect: " << fmt(dr.defect) << "\n";
        std::cout << "wrote: " << base << "\n";
    }
    return kOk;
}

int run_check_dual(const std::string& path, const std::string& fname,
                   const std::string& gname, const GlobalFlags& g) {
    const cmf::Descriptor d = cmf::load_descriptor(path, g.tol);
    const cmf::DualityReport dr =
        cmf::duality_defect(d.frame(fname), d.frame(gname), d.options.tol);
    if (g.json) {
        json j{{"frames", json::array({fname, gname})}, {"is_dual", dr.is_dual}};
        put_number(j, "defect", dr.defect);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "frames: " << fname << ", " << gname << "\n";
        std::cout << "defect: " << fmt(dr.defect) << "\n";
        std::cout << "is_dual: " << yesno(dr.is_dual) << "\n";
    }
    return dr.is_dual ? kOk : kNotDual;
}

json removal_json(const cmf::RemovalReport& r) {
    json j;
    j["omega0"] = r.omega0;
    j["mass"] = r.mass;
    j["psi_at_omega0"] = fmt(r.psi_at_omega0);
    j["criterion_invertible"] = r.criterion_invertible;
    j["verdict"] = verdict_name(r.verdict);
    if (r.a_norm) {
        put_number(j, "a_norm", *r.a_norm);
    }
    if (r.k) {
        put_number(j, "k", *r.k);
    }
    if (r.guaranteed_lower_bound) {
        put_number(j, "guaranteed_lower_bound", *r.guaranteed_lower_bound);
    }
    if (r.general_dual_bound) {
        put_number(j, "general_dual_bound", *r.general_dual_bound);
    }
    return j;
}

void print_removal(const cmf::RemovalReport& r) {
    std::cout << "omega0: " << fmt(r.omega0) << "\n";
    std::cout << "mass: " << fmt(r.mass) << "\n";
    std::cout << "psi(omega0): " << fmt(r.psi_at_omega0) << "\n";
    std::cout << "criterion_invertible: " << yesno(r.criterion_invertible) << "\n";
    std::cout << "verdict: " << verdict_name(r.verdict) << "\n";
    if (r.a_norm) {
        std::cout << "a_norm: " << fmt(*r.a_norm) << "\n";
    }
    if (r.k) {
        std::cout << "k: " << fmt(*r.k) << "\n";
    }
    if (r.guaranteed_lower_bound) {
        std::cout << "guaranteed_lower_bound: " << fmt(*r.guaranteed_lower_bound) << "\n";
    }
    if (r.general_dual_bound) {
        std::cout << "general_dual_bound: " << fmt(*r.general_dual_bound) << "\n";
    }
}

int run_remove(const std::string& path, const std::string& name, const GlobalFlags& g,
               std::optional<double> omega0, std::optional<int> atom_index, bool scan,
               const std::string& dual_name) {
    const cmf::Descriptor d = cmf::load_descriptor(path, g.tol);
    const cmf::FrameMap& frame = d.frame(name);
    const double tol = d.options.tol;

    if (scan) {
        const cmf::ExactnessScan result = cmf::exactness_scan(frame, tol);
        if (g.json) {
            json j;
            j["frame"] = name;
            json per = json::array();
            for (const auto& r : result.per_atom) {
                per.push_back(removal_json(r));
            }
            j["atoms"] = per;
            j["exact_on_atoms"] = result.exact_on_atoms;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "frame: " << name << "\n";
            std::cout << "atoms: " << result.per_atom.size() << "\n";
            for (std::size_t k = 0; k < result.per_atom.size(); ++k) {
                const auto& r = result.per_atom[k];
                std::cout << "atom " << k << ": omega0=" << fmt(r.omega0)
                          << ", mass=" << fmt(r.mass)
                          << ", verdict=" << verdict_name(r.verdict);
                if (r.guaranteed_lower_bound) {
                    std::cout << ", guaranteed_lower_bound="
                              << fmt(*r.guaranteed_lower_bound);
                }
                std::cout << "\n";
            }
            std::cout << "exact_on_atoms: " << yesno(result.exact_on_atoms) << "\n";
        }
        return kOk;
    }

    double point = 0.0;
    if (atom_index) {
        const auto& atoms = d.measure->atoms();
        if (*atom_index < 0 || static_cast<std::size_t>(*atom_index) >= atoms.size()) {
            throw cmf::OutOfDomain("atom index " + std::to_string(*atom_index) +
                                   " out of range");
        }
        point = atoms[static_cast<std::size_t>(*atom_index)].point;
    } else {
        point = *omega0;
    }

    const cmf::FrameMap* explicit_dual = nullptr;
    if (!dual_name.empty()) {
        explicit_dual = &d.frame(dual_name);
    }
    const cmf::RemovalReport report = cmf::removal_check_atom(frame, point, tol, explicit_dual);
    if (g.json) {
        json j = removal_json(report);
        j["frame"] = name;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "frame: " << name << "\n";
        print_removal(report);
    }
    return kOk;
}

int run_riesz(const std::string& path, const std::string& name, const GlobalFlags& g) {
    const cmf::Descriptor d = cmf::load_descriptor(path, g.tol);
    const cmf::RieszReport report = cmf::riesz_type_check(d.frame(name), d.options.tol);
    if (g.json) {
        json j;
        j["frame"] = name;
        j["applicable"] = report.applicable;
        j["rank"] = report.rank;
        j["target_dim"] = report.target_dim;
        j["is_riesz_type"] = report.is_riesz_type;
        j["zero_atoms"] = report.zero_atoms;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "frame: " << name << "\n";
        std::cout << "applicable: " << yesno(report.applicable) << "\n";
        std::cout << "rank: " << report.rank << "\n";
        std::cout << "target_dim: " << report.target_dim << "\n";
        std::cout << "is_riesz_type: " << yesno(report.is_riesz_type) << "\n";
        std::cout << "zero_atoms:";
        if (report.zero_atoms.empty()) {
            std::cout << " (none)";
        } else {
            for (std::size_t k : report.zero_atoms) {
                std::cout << " " << k;
            }
        }
        std::cout << "\n";
    }
    return kOk;
}

int run_psi(const std::string& path, const std::string& name, double omega0,
            const GlobalFlags& g) {
    const cmf::Descriptor d = cmf::load_descriptor(path, g.tol);
    const cmf::FrameMap& frame = d.frame(name);
    const double tol = d.options.tol;
    const cmf::AlgebraPoly psi = cmf::psi_map(frame, omega0, tol);
    const cmf::AlgebraElement at0 = cmf::eval(psi, *d.measure, omega0);
    const double defect = cmf::psi_identity_defect(frame, omega0, tol);
    if (g.json) {
        json j;
        j["frame"] = name;
        j["omega0"] = omega0;
        j["psi_at_omega0"] = fmt(at0);
        json intervals = json::array();
        for (std::size_t i = 0; i < psi.interval_count(); ++i) {
            json coeffs = json::array();
            for (const auto& c : psi.interval_coeffs(i)) {
                coeffs.push_back(fmt(c));
            }
            intervals.push_back(coeffs);
        }
        j["intervals"] = intervals;
        json atoms = json::array();
        for (std::size_t k = 0; k < psi.atom_count(); ++k) {
            atoms.push_back(fmt(psi.atom_value(k)));
        }
        j["atoms"] = atoms;
        put_number(j, "identity_defect", defect);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "frame: " << name << "\n";
        std::cout << "omega0: " << fmt(omega0) << "\n";
        std::cout << "psi(omega0): " << fmt(at0) << "\n";
        for (std::size_t i = 0; i < psi.interval_count(); ++i) {
            std::cout << "interval " << i << ":\n";
            const auto& coeffs = psi.interval_coeffs(i);
            for (std::size_t j = 0; j < coeffs.size(); ++j) {
                std::cout << "  w^" << j << ": " << fmt(coeffs[j]) << "\n";
            }
        }
        for (std::size_t k = 0; k < psi.atom_count(); ++k) {
            std::cout << "atom " << k << " (omega0=" << fmt(d.measure->atoms()[k].point)
                      << "): " << fmt(psi.atom_value(k)) << "\n";
        }
        std::cout << "identity_defect: " << fmt(defect) << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous frames in finite Hilbert modules over block matrix algebras"};
    app.require_subcommand(1);

    double tol_value = cmf::kDefaultTol;
    std::uint64_t seed_value = 0;
    GlobalFlags flags;
    auto* tol_opt = app.add_option("--tol", tol_value, "tolerance override");
    auto* seed_opt = app.add_option("--seed", seed_value, "sampling seed override");
    app.add_flag("--json", flags.json, "machine-readable output");

    std::string path;
    std::string frame_name;
    std::string second_frame;
    std::string out_path;
    std::string strategy_flag;
    std::string dual_flag;
    int directions_flag = 0;
    double omega0_value = 0.0;
    int atom_index_value = 0;
    bool scan_flag = false;

    CLI::App* validate = app.add_subcommand("validate", "check a descriptor file");
    validate->fallthrough();
    validate->add_option("path", path, "descriptor file")->required();

    CLI::App* bounds = app.add_subcommand("bounds", "frame bounds of a named map");
    bounds->fallthrough();
    bounds->add_option("path", path)->required();
    bounds->add_option("frame", frame_name)->required();
    bounds->add_option("--strategy", strategy_flag, "auto, commutative-exact, direction-sampled")
        ->check(CLI::IsMember({"auto", "commutative-exact", "direction-sampled"}));
    bounds->add_option("--directions", directions_flag, "directions per block when sampling");

    CLI::App* dual = app.add_subcommand("dual", "write the canonical dual descriptor");
    dual->fallthrough();
    dual->add_option("path", path)->required();
    dual->add_option("frame", frame_name)->required();
    dual->add_option("--out", out_path, "output descriptor file")->required();

    CLI::App* check_dual = app.add_subcommand("check-dual", "duality defect of a pair");
    check_dual->fallthrough();
    check_dual->add_option("path", path)->required();
    check_dual->add_option("F", frame_name)->required();
    check_dual->add_option("G", second_frame)->required();

    CLI::App* remove = app.add_subcommand("remove", "single-point removal dichotomy");
    remove->fallthrough();
    remove->add_option("path", path)->required();
    remove->add_option("frame", frame_name)->required();
    auto* omega_opt = remove->add_option("--omega0", omega0_value, "point to remove");
    auto* index_opt = remove->add_option("--atom-index", atom_index_value, "atom index to remove");
    remove->add_flag("--scan", scan_flag, "run the removal check at every atom");
    remove->add_option("--dual", dual_flag, "explicit dual frame for the general bound");

    CLI::App* riesz = app.add_subcommand("riesz", "Riesz-type classification");
    riesz->fallthrough();
    riesz->add_option("path", path)->required();
    riesz->add_option("frame", frame_name)->required();

    CLI::App* psi = app.add_subcommand("psi", "coefficient map of a removal point");
    psi->fallthrough();
    psi->add_option("path", path)->required();
    psi->add_option("frame", frame_name)->required();
    psi->add_option("--omega0", omega0_value, "base point")->required();

    CLI11_PARSE(app, argc, argv);

    if (tol_opt->count() > 0) {
        flags.tol = tol_value;
    }
    if (seed_opt->count() > 0) {
        flags.seed = seed_value;
    }

    try {
        if (app.got_subcommand(validate)) {
            return run_validate(path, flags);
        }
        if (app.got_subcommand(bounds)) {
            return run_bounds(path, frame_name, flags, strategy_flag, directions_flag);
        }
        if (app.got_subcommand(dual)) {
            return run_dual(path, frame_name, out_path, flags);
        }
        if (app.got_subcommand(check_dual)) {
            return run_check_dual(path, frame_name, second_frame, flags);
        }
        if (app.got_subcommand(remove)) {
            const int picked = (omega_opt->count() > 0 ? 1 : 0) +
                               (index_opt->count() > 0 ? 1 : 0) + (scan_flag ? 1 : 0);
            if (picked != 1) {
                std::cerr << "error: choose exactly one of --omega0, --atom-index, --scan\n";
                return kFailure;
            }
            std::optional<double> w;
            std::optional<int> idx;
            if (omega_opt->count() > 0) {
                w = omega0_value;
            }
            if (index_opt->count() > 0) {
                idx = atom_index_value;
            }
            return run_remove(path, frame_name, flags, w, idx, scan_flag, dual_flag);
        }
        if (app.got_subcommand(riesz)) {
            return run_riesz(path, frame_name, flags);
        }
        if (app.got_subcommand(psi)) {
            return run_psi(path, frame_name, omega0_value, flags);
        }
    } catch (const cmf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const cmf::ValidationFailure& e) {
        std::cerr << "error: invalid descriptor: " << e.what() << "\n";
        return kInvalid;
    } catch (const cmf::NotAFrame& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotAFrame;
    } catch (const cmf::KernelViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kKernelViolation;
    } catch (const cmf::NotDual& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotDual;
    } catch (const cmf::Singular& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSingular;
    } catch (const cmf::OutOfDomain& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOutOfDomain;
    } catch (const cmf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
