#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "folcyc/io.hpp"
#include "folcyc/version.hpp"

namespace folcyc::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string config_file;
    std::string out_dir;
    std::string run_id;
    std::string a_text, eps_text;
    int m = 0;  // 0 = not set
    bool emit_traces = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_file, "configuration file (JSON)");
    sub->add_option("--out", c.out_dir, "output directory");
    sub->add_option("--run-id", c.run_id, "identifier used in output file names");
    sub->add_option("--a", c.a_text, "perturbation shape parameter, e.g. 0.05 or 0.05+0i");
    sub->add_option("--eps", c.eps_text, "perturbation size, e.g. 0.001+0.5i");
    sub->add_option("--m", c.m, "cycle multiplicity")->check(CLI::PositiveNumber);
    sub->add_flag("--emit-traces", c.emit_traces, "also write a tabular trace file");
}

RunConfig resolve(const Common& c) {
    RunConfig cfg;
    if (!c.config_file.empty()) cfg = load_config(c.config_file);
    if (c.m > 0) cfg.m = c.m;
    if (!c.a_text.empty()) cfg.a = parse_complex(c.a_text);
    if (!c.eps_text.empty()) cfg.eps = parse_complex(c.eps_text);
    if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
    if (c.emit_traces) cfg.emit_traces = true;
    return cfg;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Writer {
    fs::path dir;
    std::string run_id;

    void result(const Json& j) const {
        write_text_file((dir / ("result." + run_id)).string(), j.dump(2) + "\n");
    }
    void meta(const std::string& subcommand, const RunConfig& cfg) const {
        Json j;
        j["tool"] = "folcyc";
        j["version"] = FOLCYC_VERSION;
        j["subcommand"] = subcommand;
        j["integrator"] = {{"rel_tol", cfg.rel_tol},
                           {"abs_tol", cfg.abs_tol},
                           {"max_steps", cfg.max_steps}};
        j["quadrature_points"] = cfg.quadrature_points;
        j["annulus_A0"] = {{"rho", cfg.annulus_A0.rho}, {"R", cfg.annulus_A0.R}};
        j["guard"] = {{"rho", cfg.guard.rho}, {"R", cfg.guard.R}};
        j["generated_at"] = iso_timestamp();
        write_text_file((dir / ("meta." + run_id)).string(), j.dump(2) + "\n");
    }
    void trace(const std::string& header, const std::string& rows) const {
        write_text_file((dir / ("trace." + run_id)).string(), header + rows);
    }
};

Writer make_writer(const RunConfig& cfg, const Common& c, const std::string& sub) {
    Writer w;
    w.dir = cfg.out_dir;
    w.run_id = c.run_id.empty() ? sub : c.run_id;
    fs::create_directories(w.dir);
    return w;
}

int cmd_pmap(const Common& c, const std::string& u_text, int iter) {
    RunConfig cfg = resolve(c);
    const Complex u = parse_complex(u_text);
    const FoliationParams params = family_of(cfg);
    const LiftOptions opts = lift_options_of(cfg);

    const MapJet jet = poincare_iter(u, iter, params, opts);

    Json j;
    j["subcommand"] = "pmap";
    j["a"] = to_json(params.a);
    j["eps"] = to_json(params.eps);
    j["u"] = to_json(u);
    j["iter"] = iter;
    j["value"] = to_json(jet.value);
    j["derivative"] = to_json(jet.derivative);

    Writer w = make_writer(cfg, c, "pmap");
    w.result(j);
    w.meta("pmap", cfg);
    if (cfg.emit_traces) {
        LiftOptions topts = lift_options_of(cfg, true);
        const LiftResult lift =
            lift_segment(xi_from_w(u), Complex{0.0, 0.0},
                         Complex{2.0 * std::numbers::pi * iter, 0.0}, params, topts);
        std::ostringstream rows;
        for (const auto& [zeta, xi] : lift.trace)
            rows << format_double(zeta.real()) << '\t' << format_double(zeta.imag())
                 << '\t' << format_double(xi.real()) << '\t'
                 << format_double(xi.imag()) << '\t' << format_double(std::norm(xi))
                 << '\n';
        w.trace("# zeta_re\tzeta_im\txi_re\txi_im\th_abs\n", rows.str());
    }
    std::cout << "pmap(" << format_complex(u) << ") = " << format_complex(jet.value)
              << "  dP/du = " << format_complex(jet.derivative) << "\n";
    return 0;
}

int cmd_melnikov(const Common& c, const std::string& u_text, int n_points) {
    RunConfig cfg = resolve(c);
    if (n_points > 0) cfg.quadrature_points = n_points;
    const Complex u = parse_complex(u_text);
    const MelnikovEval ev = melnikov_eval(cfg.m, u, cfg.quadrature_points);

    Json j = to_json(ev);
    j["subcommand"] = "melnikov";
    j["n_points"] = cfg.quadrature_points;

    Writer w = make_writer(cfg, c, "melnikov");
    w.result(j);
    w.meta("melnikov", cfg);
    std::cout << "I_" << ev.m << "(" << format_complex(u)
              << ", i/m) = " << format_complex(ev.quadrature_value)
              << "  closed form " << format_complex(ev.closed_form_value)
              << "  |err| = " << format_double(ev.abs_error) << "\n";
    return 0;
}

int cmd_pontryagin(const Common& c, double h, int n_points) {
    RunConfig cfg = resolve(c);
    if (n_points > 0) cfg.quadrature_points = n_points;
    const FoliationParams params = family_of(cfg);
    const Complex value = pontryagin_integral(h, params, cfg.quadrature_points);

    Json j;
    j["subcommand"] = "pontryagin";
    j["h"] = h;
    j["a"] = to_json(params.a);
    j["n_points"] = cfg.quadrature_points;
    j["value"] = to_json(value);

    Writer w = make_writer(cfg, c, "pontryagin");
    w.result(j);
    w.meta("pontryagin", cfg);
    std::cout << "I(" << format_double(h) << ") = " << format_complex(value) << "\n";
    return 0;
}

int cmd_winding(const Common& c, const std::string& center_text, double radius,
                int n_samples) {
    RunConfig cfg = resolve(c);
    const FoliationParams params = family_of(cfg);
    const LiftOptions opts = lift_options_of(cfg);
    const Complex center =
        center_text.empty() ? Complex{0.0, 0.0} : parse_complex(center_text);
    if (radius <= 0.0) {
        const auto guesses = initial_guesses(cfg.m, params);
        radius = std::min(1.5 * std::abs(guesses.front()), 0.94);
    }
    const int w_count = winding_count(center, radius, cfg.m, params, n_samples, opts);

    Json j;
    j["subcommand"] = "winding";
    j["m"] = cfg.m;
    j["a"] = to_json(params.a);
    j["eps"] = to_json(params.eps);
    j["center"] = to_json(center);
    j["radius"] = radius;
    j["n_samples"] = n_samples;
    j["winding"] = w_count;

    Writer w = make_writer(cfg, c, "winding");
    w.result(j);
    w.meta("winding", cfg);
    std::cout << "winding = " << w_count << " on |u - " << format_complex(center)
              << "| = " << format_double(radius) << "\n";
    return 0;
}

int cmd_find_orbit(const Common& c) {
    RunConfig cfg = resolve(c);
    const FoliationParams params = family_of(cfg);
    const LiftOptions opts = lift_options_of(cfg);

    Json j;
    j["subcommand"] = "find-orbit";
    j["m"] = cfg.m;
    j["a"] = to_json(params.a);
    j["eps"] = to_json(params.eps);

    Writer w = make_writer(cfg, c, "find-orbit");
    int status = 0;
    try {
        const FindOrbitsResult found = find_orbits(cfg.m, params, opts);
        j["search_radius"] = found.search_radius;
        j["winding"] = found.winding;
        j["newton_attempts"] = found.newton_attempts;
        j["newton_successes"] = found.newton_successes;
        j["merged"] = found.merged;
        Json arr = Json::array();
        for (const OrbitRecord& rec : found.orbits) arr.push_back(to_json(rec));
        j["orbits"] = std::move(arr);
        std::cout << "found " << found.orbits.size() << " orbit(s), winding "
                  << found.winding << "\n";
    } catch (const EmptyResult& e) {
        j["orbits"] = Json::array();
        j["winding"] = e.winding;
        j["newton_attempts"] = e.attempts;
        j["newton_successes"] = e.successes;
        j["diagnostics"] = e.what();
        std::cout << e.what() << "\n";
        status = 1;
    }
    w.result(j);
    w.meta("find-orbit", cfg);
    return status;
}

int cmd_continue(const Common& c) {
    RunConfig cfg = resolve(c);
    const std::vector<Complex> vertices = path_of(cfg);

    FoliationParams params = family_of(cfg);
    params.eps = vertices.front();
    const LiftOptions opts = lift_options_of(cfg);

    const FindOrbitsResult found = find_orbits(cfg.m, params, opts);
    const OrbitRecord& start = found.orbits.front();

    EpsPath path = straight_path(vertices.front(), vertices.back());
    path.vertices = vertices;

    const ContinuationTrace trace =
        continue_orbit(start, path, opts, cfg.annulus_A0);

    Json j;
    j["subcommand"] = "continue";
    j["m"] = cfg.m;
    j["a"] = to_json(params.a);
    j["start_eps"] = to_json(vertices.front());
    j["target_eps"] = to_json(vertices.back());
    j["terminal"] = to_string(trace.terminal);
    j["eps_star"] = trace.eps_star ? to_json(*trace.eps_star) : Json();
    j["n_samples"] = trace.samples.size();
    j["final_eps"] = to_json(trace.samples.back().eps);
    j["detail"] = trace.detail;
    j["final_escape"] = to_json(trace.samples.back().escape);

    Writer w = make_writer(cfg, c, "continue");
    w.result(j);
    w.meta("continue", cfg);
    if (cfg.emit_traces) {
        std::ostringstream rows;
        int idx = 0;
        for (const ContinuationSample& s : trace.samples) {
            rows << idx++ << '\t' << format_double(s.eps.real()) << '\t'
                 << format_double(s.eps.imag()) << '\t'
                 << format_double(s.orbit.points.front().real()) << '\t'
                 << format_double(s.orbit.points.front().imag()) << '\t'
                 << format_double(s.orbit.residual) << '\t'
                 << format_double(s.orbit.separation) << '\t'
                 << format_double(s.escape.h_min) << '\t'
                 << format_double(s.escape.h_max) << '\t' << s.escape.base_in_A0
                 << '\t' << s.escape.loop_in_A0 << '\t' << s.escape.flagged << '\n';
        }
        w.trace(
            "# idx\teps_re\teps_im\tu1_re\tu1_im\tresidual\tseparation\th_min\th_"
            "max\tbase_in_A0\tloop_in_A0\tflagged\n",
            rows.str());
    }
    std::cout << "terminal " << to_string(trace.terminal) << " after "
              << trace.samples.size() << " samples";
    if (trace.eps_star)
        std::cout << ", eps* = " << format_complex(*trace.eps_star);
    std::cout << "\n";
    return trace.eps_star ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"folcyc: return maps, multi-fold limit cycles and their escape "
                 "for a perturbed polynomial foliation"};
    app.require_subcommand(1);

    Common c_pmap, c_mel, c_pont, c_wind, c_find, c_cont;
    std::string u_pmap, u_mel, center_text;
    int iter = 1, n_mel = 0, n_pont = 0, n_wind = 512;
    double h_value = 1.0, radius = 0.0;

    CLI::App* pmap = app.add_subcommand("pmap", "evaluate the return map");
    add_common(pmap, c_pmap);
    pmap->add_option("--u", u_pmap, "section coordinate u")->required();
    pmap->add_option("--iter", iter, "iterate count")->check(CLI::PositiveNumber);

    CLI::App* mel = app.add_subcommand("melnikov", "resonant displacement integral");
    add_common(mel, c_mel);
    mel->add_option("--u", u_mel, "section coordinate u")->required();
    mel->add_option("--n", n_mel, "quadrature points");

    CLI::App* pont = app.add_subcommand("pontryagin", "loop integral over a real oval");
    pont->set_help_flag("--help", "print help");  // frees --h for the level
    add_common(pont, c_pont);
    pont->add_option("--h", h_value, "level of H (> 0)")->required();
    pont->add_option("--n", n_pont, "quadrature points");

    CLI::App* wind = app.add_subcommand("winding", "argument-principle root count");
    add_common(wind, c_wind);
    wind->add_option("--center", center_text, "contour center (complex)");
    wind->add_option("--radius", radius, "contour radius (default: from guesses)");
    wind->add_option("--n", n_wind, "contour samples");

    CLI::App* find = app.add_subcommand("find-orbit", "locate and certify m-periodic orbits");
    add_common(find, c_find);

    CLI::App* cont = app.add_subcommand("continue", "continue an orbit along an eps path");
    add_common(cont, c_cont);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (pmap->parsed()) return cmd_pmap(c_pmap, u_pmap, iter);
        if (mel->parsed()) return cmd_melnikov(c_mel, u_mel, n_mel);
        if (pont->parsed()) return cmd_pontryagin(c_pont, h_value, n_pont);
        if (wind->parsed()) return cmd_winding(c_wind, center_text, radius, n_wind);
        if (find->parsed()) return cmd_find_orbit(c_find);
        if (cont->parsed()) return cmd_continue(c_cont);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace folcyc::cli
