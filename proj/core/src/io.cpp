#include "folcyc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace folcyc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

double get_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int get_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool get_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

void check_keys(const Json& j, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) fail(path + "." + item.key(), "unknown key");
}

}  // namespace

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(where, "expected a two-element [re, im] array");
    return {j[0].get<double>(), j[1].get<double>()};
}

RunConfig parse_config(const Json& j) {
    RunConfig cfg;
    check_keys(j, "config",
               {"family", "m", "annulus_A0", "guard", "integrator",
                "quadrature_points", "path", "outputs"});

    if (j.contains("family")) {
        const Json& f = j["family"];
        check_keys(f, "family", {"a", "eps"});
        if (f.contains("a")) cfg.a = complex_from_json(f["a"], "family.a");
        if (f.contains("eps")) cfg.eps = complex_from_json(f["eps"], "family.eps");
    }
    if (j.contains("m")) {
        cfg.m = get_int(j["m"], "m");
        if (cfg.m < 1) fail("m", "must be >= 1");
    }

    auto parse_annulus = [&](const Json& a, const std::string& path) -> Annulus {
        check_keys(a, path, {"rho", "R"});
        if (!a.contains("rho") || !a.contains("R")) fail(path, "needs rho and R");
        const double rho = get_number(a["rho"], path + ".rho");
        const double R = get_number(a["R"], path + ".R");
        try {
            return Annulus{rho, R};
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    };
    if (j.contains("annulus_A0")) cfg.annulus_A0 = parse_annulus(j["annulus_A0"], "annulus_A0");
    if (j.contains("guard")) cfg.guard = parse_annulus(j["guard"], "guard");
    if (!(cfg.guard.rho < cfg.annulus_A0.rho && cfg.annulus_A0.R < cfg.guard.R))
        fail("annulus_A0", "must be nested strictly inside guard");

    if (j.contains("integrator")) {
        const Json& it = j["integrator"];
        check_keys(it, "integrator", {"rel_tol", "abs_tol", "max_steps"});
        if (it.contains("rel_tol")) cfg.rel_tol = get_number(it["rel_tol"], "integrator.rel_tol");
        if (it.contains("abs_tol")) cfg.abs_tol = get_number(it["abs_tol"], "integrator.abs_tol");
        if (it.contains("max_steps")) cfg.max_steps = get_int(it["max_steps"], "integrator.max_steps");
        if (!(cfg.rel_tol > 0.0)) fail("integrator.rel_tol", "must be > 0");
        if (!(cfg.abs_tol > 0.0)) fail("integrator.abs_tol", "must be > 0");
        if (cfg.max_steps < 1) fail("integrator.max_steps", "must be >= 1");
    }
    if (j.contains("quadrature_points")) {
        cfg.quadrature_points = get_int(j["quadrature_points"], "quadrature_points");
        if (cfg.quadrature_points < 64) fail("quadrature_points", "must be >= 64");
    }
    if (j.contains("path")) {
        if (!j["path"].is_array()) fail("path", "expected an array of [re, im] pairs");
        int idx = 0;
        for (const Json& v : j["path"]) {
            cfg.path.push_back(
                complex_from_json(v, "path[" + std::to_string(idx) + "]"));
            ++idx;
        }
        if (!cfg.path.empty() && cfg.path.size() < 2)
            fail("path", "needs at least 2 vertices");
    }
    if (j.contains("outputs")) {
        const Json& o = j["outputs"];
        check_keys(o, "outputs", {"dir", "emit_traces"});
        if (o.contains("dir")) cfg.out_dir = get_string(o["dir"], "outputs.dir");
        if (o.contains("emit_traces"))
            cfg.emit_traces = get_bool(o["emit_traces"], "outputs.emit_traces");
    }
    return cfg;
}

RunConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config: cannot open " + file);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return parse_config(j);
}

FoliationParams family_of(const RunConfig& cfg) {
    FoliationParams p;
    p.a = cfg.a.value_or(Complex{0.05, 0.0});
    p.eps = cfg.eps.value_or(Complex{0.001, 1.0 / cfg.m});
    validate(p);
    return p;
}

LiftOptions lift_options_of(const RunConfig& cfg, bool record_trace) {
    LiftOptions o;
    o.rel_tol = cfg.rel_tol;
    o.abs_tol = cfg.abs_tol;
    o.max_steps = cfg.max_steps;
    o.guard = cfg.guard;
    o.record_trace = record_trace;
    return o;
}

std::vector<Complex> path_of(const RunConfig& cfg) {
    if (!cfg.path.empty()) return cfg.path;
    return {family_of(cfg).eps, Complex{0.0, 0.0}};
}

Json to_json(const OrbitRecord& rec) {
    Json j;
    j["m"] = rec.m;
    j["a"] = to_json(rec.params.a);
    j["eps"] = to_json(rec.params.eps);
    Json pts = Json::array();
    for (const Complex& u : rec.points) pts.push_back(to_json(u));
    j["points"] = std::move(pts);
    j["residual"] = rec.residual;
    j["multiplier"] = to_json(rec.multiplier);
    j["separation"] = rec.separation;
    Json hs = Json::array();
    for (const Complex& h : rec.h_values) hs.push_back(to_json(h));
    j["h_values"] = std::move(hs);
    return j;
}

OrbitRecord orbit_from_json(const Json& j) {
    OrbitRecord rec;
    rec.m = get_int(j.at("m"), "orbit.m");
    rec.params.a = complex_from_json(j.at("a"), "orbit.a");
    rec.params.eps = complex_from_json(j.at("eps"), "orbit.eps");
    for (const Json& p : j.at("points"))
        rec.points.push_back(complex_from_json(p, "orbit.points"));
    rec.residual = get_number(j.at("residual"), "orbit.residual");
    rec.multiplier = complex_from_json(j.at("multiplier"), "orbit.multiplier");
    rec.separation = get_number(j.at("separation"), "orbit.separation");
    for (const Json& h : j.at("h_values"))
        rec.h_values.push_back(complex_from_json(h, "orbit.h_values"));
    return rec;
}

Json to_json(const EscapeReport& rep) {
    Json j;
    j["base_in_A0"] = rep.base_in_A0;
    j["loop_in_A0"] = rep.loop_in_A0;
    j["h_extrema"] = Json::array({rep.h_min, rep.h_max});
    j["lift_status"] = to_string(rep.lift_status);
    j["flagged"] = rep.flagged;
    return j;
}

Json to_json(const MelnikovEval& ev) {
    Json j;
    j["m"] = ev.m;
    j["u"] = to_json(ev.u);
    j["quadrature_value"] = to_json(ev.quadrature_value);
    j["closed_form_value"] = to_json(ev.closed_form_value);
    j["abs_error"] = ev.abs_error;
    return j;
}

Complex parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ConfigError("complex: empty string");

    auto parse_part = [](const std::string& part, bool imaginary_unit_alone) -> double {
        if (imaginary_unit_alone) {
            if (part.empty() || part == "+") return 1.0;
            if (part == "-") return -1.0;
        }
        double v = 0.0;
        const std::string body =
            (!part.empty() && part.front() == '+') ? part.substr(1) : part;
        const char* first = body.data();
        const char* last = body.data() + body.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw ConfigError("complex: cannot parse '" + part + "'");
        return v;
    };

    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }

    if (split == std::string::npos) {
        if (s.back() == 'i' || s.back() == 'I')
            return {0.0, parse_part(s.substr(0, s.size() - 1), true)};
        return {parse_part(s, false), 0.0};
    }

    std::string head = s.substr(0, split);
    std::string tail = s.substr(split);
    if (tail.back() == 'i' || tail.back() == 'I') {
        tail.pop_back();
        return {parse_part(head, false), parse_part(tail, true)};
    }
    if (head.back() == 'i' || head.back() == 'I') {
        head.pop_back();
        return {parse_part(tail, false), parse_part(head, true)};
    }
    throw ConfigError("complex: cannot parse '" + text + "'");
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::string format_complex(const Complex& z) {
    std::string s = format_double(z.real());
    if (z.imag() >= 0.0 || std::isnan(z.imag())) s += "+";
    s += format_double(z.imag()) + "i";
    return s;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace folcyc
