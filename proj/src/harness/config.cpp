#include "npgap/harness/config.hpp"

#include "npgap/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace npgap {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
        auto key = kv.first.as<std::string>();
        if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get(const YAML::Node& node, const std::string& where) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where + ": invalid value");
    }
}

std::vector<double> get_list(const YAML::Node& node, const std::string& where) {
    if (!node.IsSequence()) throw ConfigError(where + ": expected a list");
    std::vector<double> v;
    for (const auto& x : node) v.push_back(get<double>(x, where));
    return v;
}

Vec2 get_vec(const YAML::Node& node, const std::string& where) {
    auto v = get_list(node, where);
    if (v.size() != 2) throw ConfigError(where + ": expected two numbers");
    return {v[0], v[1]};
}

ShapeSpec parse_shape(const YAML::Node& node, const std::string& where) {
    check_keys(node, where, {"kind", "center", "radius", "a", "b", "angle", "r0", "cos", "sin"});
    ShapeSpec s;
    if (!node["kind"]) throw ConfigError(where + ": missing kind");
    s.kind = get<std::string>(node["kind"], where + ".kind");
    if (node["center"]) s.center = get_vec(node["center"], where + ".center");
    if (node["radius"]) s.radius = get<double>(node["radius"], where + ".radius");
    if (node["a"]) s.a = get<double>(node["a"], where + ".a");
    if (node["b"]) s.b = get<double>(node["b"], where + ".b");
    if (node["angle"]) s.angle = get<double>(node["angle"], where + ".angle");
    if (node["r0"]) s.r0 = get<double>(node["r0"], where + ".r0");
    if (node["cos"]) s.cos = get_list(node["cos"], where + ".cos");
    if (node["sin"]) s.sin = get_list(node["sin"], where + ".sin");
    if (s.kind != "circle" && s.kind != "ellipse" && s.kind != "fourier")
        throw ConfigError(where + ".kind: expected circle, ellipse or fourier");
    try {
        (void)s.build();
    } catch (const DomainError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return s;
}

HarmonicBackground parse_background(const YAML::Node& node, const std::string& where) {
    check_keys(node, where, {"constant", "re", "im"});
    HarmonicBackground h{0, {}, {}};
    if (node["constant"]) h.constant = get<double>(node["constant"], where + ".constant");
    if (node["re"]) h.re = get_list(node["re"], where + ".re");
    if (node["im"]) h.im = get_list(node["im"], where + ".im");
    return h;
}

}  // namespace

Curve ShapeSpec::build() const {
    if (kind == "circle") return Curve::circle(center, radius);
    if (kind == "ellipse") return Curve::ellipse(center, a, b, angle);
    return Curve::fourier(center, r0, cos, sin);
}

std::vector<double> geometric_eps(double lo, double hi, int count) {
    std::vector<double> v;
    if (count <= 0) return v;
    if (count == 1) return {hi};
    for (int i = 0; i < count; ++i) v.push_back(hi * std::pow(lo / hi, double(i) / (count - 1)));
    return v;
}

ExperimentConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
    check_keys(root, "config", {"name", "problem", "shapes", "eps", "background", "orthogonalize",
                                "orthogonal_partner", "resolution", "probes", "seed", "output", "fit"});
    ExperimentConfig c;
    c.raw = text;
    if (root["name"]) c.name = get<std::string>(root["name"], "name");
    if (root["problem"]) {
        auto p = get<std::string>(root["problem"], "problem");
        if (p == "conducting") c.problem = Problem::conducting;
        else if (p == "insulating") c.problem = Problem::insulating;
        else throw ConfigError("problem: expected conducting or insulating");
    }
    if (!root["shapes"]) throw ConfigError("config: missing shapes");
    check_keys(root["shapes"], "shapes", {"first", "second"});
    if (!root["shapes"]["first"] || !root["shapes"]["second"]) throw ConfigError("shapes: need first and second");
    c.first = parse_shape(root["shapes"]["first"], "shapes.first");
    c.second = parse_shape(root["shapes"]["second"], "shapes.second");

    if (root["eps"]) {
        const YAML::Node& e = root["eps"];
        check_keys(e, "eps", {"values", "range"});
        if (e["values"] && e["range"]) throw ConfigError("eps: give either values or range");
        if (e["values"]) {
            c.eps = get_list(e["values"], "eps.values");
        } else if (e["range"]) {
            check_keys(e["range"], "eps.range", {"min", "max", "count"});
            double lo = get<double>(e["range"]["min"], "eps.range.min");
            double hi = get<double>(e["range"]["max"], "eps.range.max");
            int count = get<int>(e["range"]["count"], "eps.range.count");
            if (!(lo > 0) || !(hi >= lo) || count < 0) throw ConfigError("eps.range: need 0 < min <= max, count >= 0");
            c.eps = geometric_eps(lo, hi, count);
        }
    } else {
        c.eps = geometric_eps(1e-4, 1e-1, 7);
    }
    for (double e : c.eps)
        if (!(e > 0) || !std::isfinite(e)) throw ConfigError("eps: values must be positive");
    std::sort(c.eps.begin(), c.eps.end(), std::greater<>());

    if (root["background"]) c.background = parse_background(root["background"], "background");
    if (root["orthogonalize"]) c.orthogonalize = get<bool>(root["orthogonalize"], "orthogonalize");
    if (root["orthogonal_partner"]) c.partner = parse_background(root["orthogonal_partner"], "orthogonal_partner");
    if (root["resolution"]) {
        check_keys(root["resolution"], "resolution", {"n", "graded"});
        if (root["resolution"]["n"]) c.n = get<int>(root["resolution"]["n"], "resolution.n");
        if (root["resolution"]["graded"]) c.graded = get<bool>(root["resolution"]["graded"], "resolution.graded");
        if (c.n != 0 && (c.n < 16 || c.n % 2)) throw ConfigError("resolution.n: must be 0 or an even number >= 16");
    }
    if (root["probes"]) {
        check_keys(root["probes"], "probes", {"gap_samples", "exterior"});
        if (root["probes"]["gap_samples"]) c.gap_samples = get<int>(root["probes"]["gap_samples"], "probes.gap_samples");
        if (root["probes"]["exterior"]) c.exterior_probes = get<int>(root["probes"]["exterior"], "probes.exterior");
        if (c.gap_samples < 1 || c.exterior_probes < 0) throw ConfigError("probes: counts out of range");
    }
    if (root["seed"]) c.seed = get<unsigned>(root["seed"], "seed");
    if (root["output"]) {
        check_keys(root["output"], "output", {"dir", "format", "plots"});
        if (root["output"]["dir"]) c.out_dir = get<std::string>(root["output"]["dir"], "output.dir");
        if (root["output"]["format"]) c.format = get<std::string>(root["output"]["format"], "output.format");
        if (root["output"]["plots"]) {
            if (!root["output"]["plots"].IsSequence()) throw ConfigError("output.plots: expected a list");
            for (const auto& p : root["output"]["plots"]) c.plots.push_back(get<std::string>(p, "output.plots"));
        }
        if (c.format != "csv" && c.format != "json" && c.format != "both")
            throw ConfigError("output.format: expected csv, json or both");
    }
    if (root["fit"]) {
        check_keys(root["fit"], "fit", {"exclude_largest"});
        if (root["fit"]["exclude_largest"]) c.exclude_largest = get<bool>(root["fit"]["exclude_largest"], "fit.exclude_largest");
    }
    if (c.problem == Problem::insulating && c.orthogonalize)
        throw ConfigError("orthogonalize is only defined for the conducting problem");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace npgap
