#include "cmf/descriptor.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cmf {

namespace {

using nlohmann::json;

std::string line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return std::to_string(line);
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& path) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ParseError("unknown field '" + item.key() + "' in " + path);
        }
    }
}

const json& require(const json& j, const char* key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError("missing field '" + std::string(key) + "' in " + path);
    }
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ParseError("expected a number at " + path);
    }
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        throw ParseError("expected an integer at " + path);
    }
    return j.get<int>();
}

cdouble as_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("expected a complex entry [re, im] at " + path);
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::VectorXcd as_coords(const json& j, int m, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != m) {
        throw ParseError("expected " + std::to_string(m) + " complex coordinates at " + path);
    }
    Eigen::VectorXcd v(m);
    for (int i = 0; i < m; ++i) {
        v(i) = as_complex(j[static_cast<std::size_t>(i)],
                          path + "[" + std::to_string(i) + "]");
    }
    return v;
}

json complex_json(const cdouble& z) {
    return json::array({z.real(), z.imag()});
}

}  // namespace

const FrameMap& Descriptor::frame(const std::string& name) const {
    const auto it = frames.find(name);
    if (it == frames.end()) {
        throw Error("no frame named '" + name + "' in the descriptor");
    }
    return it->second;
}

BoundsOptions Descriptor::bounds_options() const {
    BoundsOptions opts;
    opts.strategy = options.strategy;
    opts.directions = options.directions;
    opts.seed = options.seed;
    opts.tol = options.tol;
    return opts;
}

Descriptor parse_descriptor(const std::string& text, const std::string& origin,
                            std::optional<double> tol_override) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": line " + line_of(text, e.byte) + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ParseError(origin + ": descriptor must be a JSON object");
    }
    reject_unknown(root, {"algebra", "module", "measure", "frames", "options"}, "descriptor");

    Descriptor d;

    // options first: the tolerance feeds validation
    if (root.contains("options")) {
        const json& jo = root["options"];
        reject_unknown(jo, {"tol", "strategy", "directions", "seed"}, "options");
        if (jo.contains("tol")) {
            d.options.tol = as_number(jo["tol"], "options.tol");
            if (!(d.options.tol > 0.0)) {
                throw ParseError("options.tol must be positive");
            }
        }
        if (jo.contains("strategy")) {
            const std::string s = jo["strategy"].is_string()
                                      ? jo["strategy"].get<std::string>()
                                      : throw ParseError("options.strategy must be a string");
            if (s == "auto") {
                d.options.strategy = std::nullopt;
            } else if (s == "commutative-exact") {
                d.options.strategy = BoundsStrategy::CommutativeExact;
            } else if (s == "direction-sampled") {
                d.options.strategy = BoundsStrategy::DirectionSampled;
            } else {
                throw ParseError("options.strategy must be auto, commutative-exact, or "
                                 "direction-sampled");
            }
        }
        if (jo.contains("directions")) {
            d.options.directions = as_int(jo["directions"], "options.directions");
            if (d.options.directions < 1) {
                throw ParseError("options.directions must be positive");
            }
        }
        if (jo.contains("seed")) {
            if (!jo["seed"].is_number_unsigned() && !jo["seed"].is_number_integer()) {
                throw ParseError("options.seed must be an integer");
            }
            d.options.seed = jo["seed"].get<std::uint64_t>();
        }
    }
    if (tol_override) {
        d.options.tol = *tol_override;
    }

    // algebra
    const json& ja = require(root, "algebra", "descriptor");
    reject_unknown(ja, {"block_sizes"}, "algebra");
    const json& jsizes = require(ja, "block_sizes", "algebra");
    if (!jsizes.is_array() || jsizes.empty()) {
        throw ParseError("algebra.block_sizes must be a nonempty array");
    }
    std::vector<int> sizes;
    for (std::size_t k = 0; k < jsizes.size(); ++k) {
        const int n = as_int(jsizes[k], "algebra.block_sizes[" + std::to_string(k) + "]");
        if (n < 1) {
            throw ParseError("algebra.block_sizes entries must be positive");
        }
        sizes.push_back(n);
    }
    const BlockSpec spec(sizes);

    // module
    const json& jm = require(root, "module", "descriptor");
    reject_unknown(jm, {"rows", "cols", "basis"}, "module");
    const int rows = as_int(require(jm, "rows", "module"), "module.rows");
    const int cols = as_int(require(jm, "cols", "module"), "module.cols");
    if (rows != spec.total_dim()) {
        throw ParseError("module.rows must equal the algebra embedding dimension " +
                         std::to_string(spec.total_dim()));
    }
    const json& jbasis = require(jm, "basis", "module");
    if (!jbasis.is_array() || jbasis.empty()) {
        throw ParseError("module.basis must be a nonempty array of matrices");
    }
    std::vector<Eigen::MatrixXcd> basis;
    for (std::size_t b = 0; b < jbasis.size(); ++b) {
        const std::string bpath = "module.basis[" + std::to_string(b) + "]";
        const json& jmat = jbasis[b];
        if (!jmat.is_array() || static_cast<int>(jmat.size()) != rows) {
            throw ParseError(bpath + " must have " + std::to_string(rows) + " rows");
        }
        Eigen::MatrixXcd mat(rows, cols);
        for (int r = 0; r < rows; ++r) {
            const json& jrow = jmat[static_cast<std::size_t>(r)];
            if (!jrow.is_array() || static_cast<int>(jrow.size()) != cols) {
                throw ParseError(bpath + " row " + std::to_string(r) + " must have " +
                                 std::to_string(cols) + " entries");
            }
            for (int c = 0; c < cols; ++c) {
                mat(r, c) = as_complex(jrow[static_cast<std::size_t>(c)],
                                       bpath + "[" + std::to_string(r) + "][" +
                                           std::to_string(c) + "]");
            }
        }
        basis.push_back(std::move(mat));
    }

    SpacePtr space;
    try {
        space = std::make_shared<const ModuleSpace>(spec, rows, cols, std::move(basis));
    } catch (const Error& e) {
        throw ParseError(std::string("module: ") + e.what());
    }

    // measure
    const json& jme = require(root, "measure", "descriptor");
    reject_unknown(jme, {"intervals", "atoms"}, "measure");
    std::vector<Interval> intervals;
    const json& jiv = require(jme, "intervals", "measure");
    if (!jiv.is_array()) {
        throw ParseError("measure.intervals must be an array");
    }
    for (std::size_t i = 0; i < jiv.size(); ++i) {
        const std::string ipath = "measure.intervals[" + std::to_string(i) + "]";
        const json& pair = jiv[i];
        if (!pair.is_array() || pair.size() != 2) {
            throw ParseError(ipath + " must be [lo, hi]");
        }
        intervals.push_back({as_number(pair[0], ipath + "[0]"),
                             as_number(pair[1], ipath + "[1]")});
    }
    std::vector<Atom> atoms;
    const json& jat = require(jme, "atoms", "measure");
    if (!jat.is_array()) {
        throw ParseError("measure.atoms must be an array");
    }
    for (std::size_t k = 0; k < jat.size(); ++k) {
        const std::string apath = "measure.atoms[" + std::to_string(k) + "]";
        const json& ja2 = jat[k];
        if (!ja2.is_object()) {
            throw ParseError(apath + " must be an object with point and mass");
        }
        reject_unknown(ja2, {"point", "mass"}, apath);
        atoms.push_back({as_number(require(ja2, "point", apath), apath + ".point"),
                         as_number(require(ja2, "mass", apath), apath + ".mass")});
    }
    MeasurePtr measure;
    try {
        measure = std::make_shared<const MeasureSpace>(std::move(intervals), std::move(atoms));
    } catch (const Error& e) {
        throw ParseError(std::string("measure: ") + e.what());
    }

    // frames
    const json& jf = require(root, "frames", "descriptor");
    if (!jf.is_object() || jf.empty()) {
        throw ParseError("frames must be a nonempty object of named maps");
    }
    const int m = space->dim();
    for (const auto& item : jf.items()) {
        const std::string fpath = "frames." + item.key();
        const json& jframe = item.value();
        reject_unknown(jframe, {"intervals", "atoms"}, fpath);
        const json& jic = require(jframe, "intervals", fpath);
        if (!jic.is_array() ||
            jic.size() != measure->interval_count()) {
            throw ParseError(fpath + ".intervals must have one coefficient list per "
                             "measure interval");
        }
        std::vector<std::vector<Eigen::VectorXcd>> coeffs;
        for (std::size_t i = 0; i < jic.size(); ++i) {
            const std::string cpath = fpath + ".intervals[" + std::to_string(i) + "]";
            const json& list = jic[i];
            if (!list.is_array()) {
                throw ParseError(cpath + " must be an array of coefficient vectors");
            }
            std::vector<Eigen::VectorXcd> powers;
            for (std::size_t j = 0; j < list.size(); ++j) {
                powers.push_back(
                    as_coords(list[j], m, cpath + "[" + std::to_string(j) + "]"));
            }
            coeffs.push_back(std::move(powers));
        }
        const json& jav = require(jframe, "atoms", fpath);
        if (!jav.is_array() || jav.size() != measure->atom_count()) {
            throw ParseError(fpath + ".atoms must have one value per measure atom");
        }
        std::vector<Eigen::VectorXcd> values;
        for (std::size_t k = 0; k < jav.size(); ++k) {
            values.push_back(
                as_coords(jav[k], m, fpath + ".atoms[" + std::to_string(k) + "]"));
        }
        try {
            d.frames.emplace(item.key(),
                             FrameMap(space, measure, std::move(coeffs), std::move(values)));
        } catch (const Error& e) {
            throw ParseError(fpath + ": " + e.what());
        }
    }

    d.space = std::move(space);
    d.measure = std::move(measure);

    const ValidationReport report = validate(*d.space, d.options.tol);
    if (!report.valid()) {
        throw ValidationFailure(report);
    }
    return d;
}

Descriptor load_descriptor(const std::string& path, std::optional<double> tol_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_descriptor(buf.str(), path, tol_override);
}

std::string serialize_descriptor(const Descriptor& d) {
    json root;

    json sizes = json::array();
    for (int n : d.space->algebra().sizes()) {
        sizes.push_back(n);
    }
    root["algebra"] = {{"block_sizes", sizes}};

    json basis = json::array();
    for (const auto& mat : d.space->basis()) {
        json jmat = json::array();
        for (Eigen::Index r = 0; r < mat.rows(); ++r) {
            json jrow = json::array();
            for (Eigen::Index c = 0; c < mat.cols(); ++c) {
                jrow.push_back(complex_json(mat(r, c)));
            }
            jmat.push_back(jrow);
        }
        basis.push_back(jmat);
    }
    root["module"] = {{"rows", d.space->rows()},
                      {"cols", d.space->cols()},
                      {"basis", basis}};

    json intervals = json::array();
    for (const Interval& iv : d.measure->intervals()) {
        intervals.push_back(json::array({iv.lo, iv.hi}));
    }
    json atoms = json::array();
    for (const Atom& atom : d.measure->atoms()) {
        atoms.push_back({{"point", atom.point}, {"mass", atom.mass}});
    }
    root["measure"] = {{"intervals", intervals}, {"atoms", atoms}};

    json frames = json::object();
    for (const auto& [name, frame] : d.frames) {
        json jic = json::array();
        for (std::size_t i = 0; i < frame.interval_count(); ++i) {
            json list = json::array();
            for (const auto& c : frame.interval_coeffs(i)) {
                json coords = json::array();
                for (Eigen::Index t = 0; t < c.size(); ++t) {
                    coords.push_back(complex_json(c(t)));
                }
                list.push_back(coords);
            }
            jic.push_back(list);
        }
        json jav = json::array();
        for (std::size_t k = 0; k < frame.atom_count(); ++k) {
            json coords = json::array();
            const auto& v = frame.atom_value(k);
            for (Eigen::Index t = 0; t < v.size(); ++t) {
                coords.push_back(complex_json(v(t)));
            }
            jav.push_back(coords);
        }
        frames[name] = {{"intervals", jic}, {"atoms", jav}};
    }
    root["frames"] = frames;

    std::string strategy = "auto";
    if (d.options.strategy == BoundsStrategy::CommutativeExact) {
        strategy = "commutative-exact";
    } else if (d.options.strategy == BoundsStrategy::DirectionSampled) {
        strategy = "direction-sampled";
    }
    root["options"] = {{"tol", d.options.tol},
                       {"strategy", strategy},
                       {"directions", d.options.directions},
                       {"seed", d.options.seed}};

    return root.dump(2) + "\n";
}

void save_descriptor(const Descriptor& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << serialize_descriptor(d);
}

}  // namespace cmf
