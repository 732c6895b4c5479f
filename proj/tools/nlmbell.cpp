// nlmbell: enumerate machine-assisted Bell polytope vertices, verify facet
// candidates exactly, and optimize quantum violations over measurement
// settings. Exit codes: 0 = success / claim holds, 1 = claim fails,
// 2 = usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlm/behavior.hpp"
#include "nlm/demo.hpp"
#include "nlm/facets.hpp"
#include "nlm/inequality.hpp"
#include "nlm/quantum.hpp"
#include "nlm/settings_opt.hpp"
#include "nlm/strategies.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimFails = 1;
constexpr int kExitUsage = 2;

nlm::CGInequality load_inequality(const std::string& spec) {
    for (const std::string& name : nlm::builtin_names())
        if (name == spec) return nlm::builtin(name);
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open inequality file: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    return nlm::parse_inequality(ss.str());
}

std::vector<nlm::CGPoint<nlm::Rational>> points_for_resource(const nlm::Scenario& sc,
                                                             const std::string& resource) {
    if (resource == "det") return nlm::enumerate_deterministic(sc);
    if (resource == "nlm1") return nlm::enumerate_nlm(sc);
    throw std::invalid_argument("unknown resource: " + resource + " (expected det or nlm1)");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
}

bool plane_for(const std::string& plane_flag, const nlm::CGInequality& ineq) {
    if (plane_flag == "on") return true;
    if (plane_flag == "off") return false;
    // auto: the three-settings optimum stays in a plane, the four-settings
    // one does not
    return ineq.scenario.m_a + ineq.scenario.m_b <= 6;
}

int cmd_enumerate(const std::string& scenario_tag, const std::string& resource,
                  const std::string& out_path) {
    nlm::Scenario sc = nlm::parse_scenario(scenario_tag);
    if (scenario_tag != "2222" && scenario_tag != "3322" && scenario_tag != "4322")
        throw std::invalid_argument("unsupported scenario: " + scenario_tag);
    auto points = points_for_resource(sc, resource);
    if (!out_path.empty()) {
        std::ostringstream os;
        nlm::write_points_csv(os, sc, points);
        write_file(out_path, os.str());
    }
    std::cout << "scenario " << scenario_tag << " resource " << resource << ": " << points.size()
              << " distinct points" << (out_path.empty() ? "" : " -> " + out_path) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& ineq_spec, const std::string& resource,
               const std::string& points_path, const std::string& out_path) {
    nlm::CGInequality ineq = load_inequality(ineq_spec);
    std::vector<nlm::CGPoint<nlm::Rational>> points;
    if (!points_path.empty()) {
        std::ifstream in(points_path);
        if (!in) throw std::invalid_argument("cannot open points file: " + points_path);
        points = nlm::read_points_csv(in);
    } else {
        points = points_for_resource(ineq.scenario, resource);
    }
    nlm::FacetReport rep = nlm::verify_facet(ineq, points);
    nlohmann::json j = nlm::facet_report_to_json(rep);
    j["inequality"] = ineq.name.empty() ? ineq_spec : ineq.name;
    j["n_vertices"] = points.size();
    if (!out_path.empty()) write_file(out_path, j.dump(2) + "\n");
    std::cout << "inequality " << (ineq.name.empty() ? ineq_spec : ineq.name) << " on "
              << points.size() << " vertices:\n"
              << "  valid:        " << (rep.valid ? "yes" : "no") << " (" << rep.violators.size()
              << " violators)\n"
              << "  saturating:   " << rep.n_saturating << "\n"
              << "  linear rank:  " << rep.linear_rank << "\n"
              << "  polytope dim: " << rep.polytope_dim << "\n"
              << "  facet:        " << (rep.is_facet ? "yes" : "no") << "\n";
    return rep.is_facet ? kExitOk : kExitClaimFails;
}

int cmd_optimize(const std::string& ineq_spec, double alpha, int restarts, uint64_t seed,
                 const std::string& plane_flag, const std::string& out_path) {
    nlm::CGInequality ineq = load_inequality(ineq_spec);
    nlm::OptimizeOptions opt;
    opt.restarts = restarts;
    opt.seed = seed;
    opt.plane_xz = plane_for(plane_flag, ineq);
    nlm::OptimizeResult res = nlm::optimize_settings(ineq, nlm::PureState(alpha), opt);
    std::cout << "max <" << (ineq.name.empty() ? ineq_spec : ineq.name) << "> at alpha="
              << alpha << " : " << res.value << "\n";
    auto print_side = [](const char* label, const std::vector<nlm::BlochSetting>& side) {
        std::cout << "  " << label << ":";
        for (const auto& s : side) std::cout << " (" << s.theta << ", " << s.phi << ")";
        std::cout << "\n";
    };
    print_side("A", res.config.alice);
    print_side("B", res.config.bob);
    if (!out_path.empty()) {
        nlohmann::json j;
        j["inequality"] = ineq.name.empty() ? ineq_spec : ineq.name;
        j["alpha"] = alpha;
        j["value"] = res.value;
        j["plane_xz"] = opt.plane_xz;
        j["restarts"] = opt.restarts;
        j["seed"] = opt.seed;
        j["settings"] = nlm::settings_to_json(res.config);
        write_file(out_path, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_sweep(const std::string& ineq_spec, int steps, double alpha_min, double alpha_max,
              int restarts, uint64_t seed, const std::string& plane_flag,
              const std::string& out_path, const std::string& json_path) {
    nlm::CGInequality ineq = load_inequality(ineq_spec);
    if (!(alpha_min >= 0 && alpha_max <= std::numbers::pi / 4 + 1e-12 && alpha_min < alpha_max))
        throw std::invalid_argument("sweep: need 0 <= alpha-min < alpha-max <= pi/4");
    nlm::SweepOptions opt;
    opt.optimize.restarts = restarts;
    opt.optimize.seed = seed;
    opt.optimize.plane_xz = plane_for(plane_flag, ineq);
    nlm::SweepResult sweep = nlm::sweep_alpha(ineq, nlm::alpha_grid(alpha_min, alpha_max, steps), opt);
    if (!out_path.empty()) {
        std::ostringstream os;
        nlm::write_sweep_csv(os, ineq.scenario, sweep);
        write_file(out_path, os.str());
    }
    if (!json_path.empty()) write_file(json_path, nlm::sweep_to_json(sweep).dump(2) + "\n");
    std::cout << "sweep " << (ineq.name.empty() ? ineq_spec : ineq.name) << " over [" << alpha_min
              << ", " << alpha_max << "] (" << steps << " points)\n"
              << "  max value:  " << sweep.max_value << " at alpha=" << sweep.alpha_at_max << "\n";
    if (sweep.positive_upper_edge)
        std::cout << "  positive region upper edge: " << *sweep.positive_upper_edge << " rad\n";
    else
        std::cout << "  no positive region on this grid\n";
    return kExitOk;
}

void print_point_block(const std::string& title, const nlm::CGPoint<nlm::Rational>& p,
                       const std::vector<std::string>& ineq_names) {
    std::cout << title << "\n" << nlm::format_point_table(p);
    for (const std::string& name : ineq_names) {
        nlm::Rational v = nlm::evaluate(nlm::builtin(name), p);
        std::cout << "  " << name << " = " << v << "\n";
    }
    std::cout << "\n";
}

int cmd_demo_points() {
    using nlm::Rational;
    nlm::NLMStrategy machine = nlm::single_nlm_showcase_3322();
    print_point_block("single machine use " + machine.notation(), nlm::point_of_nlm(machine),
                      {"i3322", "m3322"});

    nlm::TwoNLMStrategy two = nlm::two_nlm_showcase_3322();
    print_point_block("two machine uses " + two.notation(), nlm::point_of_two_nlm(two),
                      {"i3322", "m3322"});

    auto one_bit = nlm::one_bit_showcase_3322();
    std::cout << "one bit of communication, equiprobable mixture of:\n";
    for (const auto& s : one_bit) std::cout << "  " << s.notation() << "\n";
    nlm::FullJoint<Rational> mixture =
        nlm::one_bit_mixture(one_bit, std::vector<Rational>(one_bit.size(), Rational(1, 5)));
    auto ns = nlm::is_no_signaling(mixture);
    std::cout << "  no-signaling: " << (ns.ok ? "yes" : "NO") << "\n";
    print_point_block("mixture point", nlm::cg_from_full(mixture), {"i3322", "m3322"});

    nlm::TwoNLMStrategy two4 = nlm::two_nlm_showcase_4322();
    print_point_block("4-settings, two machine uses " + two4.notation(),
                      nlm::point_of_two_nlm(two4), {"i4322", "m4322"});
    print_point_block("4-settings, one-bit mixture point",
                      nlm::one_bit_showcase_point(nlm::Scenario(4, 3)), {"i4322", "m4322"});
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell polytopes with a non-local machine resource"};
    app.require_subcommand(1);

    auto* enumerate = app.add_subcommand("enumerate", "Enumerate distinct behavior points");
    std::string scenario_tag = "3322", resource = "nlm1", out_path;
    enumerate->add_option("--scenario", scenario_tag, "Scenario tag: 2222, 3322 or 4322");
    enumerate->add_option("--resource", resource, "det (deterministic) or nlm1 (single machine use)");
    enumerate->add_option("--out", out_path, "Write the point CSV here");

    auto* verify = app.add_subcommand("verify", "Check validity and tightness of an inequality");
    std::string v_ineq, v_resource = "det", v_points, v_out;
    verify->add_option("--ineq", v_ineq, "Built-in name or inequality file")->required();
    verify->add_option("--resource", v_resource, "Vertex set: det or nlm1");
    verify->add_option("--points", v_points, "Read vertices from a point CSV instead");
    verify->add_option("--out", v_out, "Write the JSON report here");

    auto* optimize = app.add_subcommand("optimize", "Maximize an inequality over settings");
    std::string o_ineq, o_plane = "auto", o_out;
    double o_alpha = std::numbers::pi / 4;
    int o_restarts = 64;
    uint64_t o_seed = 1;
    optimize->add_option("--ineq", o_ineq, "Built-in name or inequality file")->required();
    optimize->add_option("--alpha", o_alpha, "Schmidt angle in radians, within [0, pi/4]");
    optimize->add_option("--restarts", o_restarts, "Random restarts");
    optimize->add_option("--seed", o_seed, "RNG seed");
    optimize->add_option("--plane", o_plane, "auto, on or off: restrict settings to the (x,z) plane");
    optimize->add_option("--out", o_out, "Write the JSON result here");

    auto* sweep = app.add_subcommand("sweep", "Optimize across a grid of Schmidt angles");
    std::string s_ineq, s_plane = "auto", s_out, s_json;
    int s_steps = 60, s_restarts = 64;
    uint64_t s_seed = 1;
    double s_min = 0.0, s_max = std::numbers::pi / 4;
    sweep->add_option("--ineq", s_ineq, "Built-in name or inequality file")->required();
    sweep->add_option("--steps", s_steps, "Grid size");
    sweep->add_option("--alpha-min", s_min, "Grid start (radians)");
    sweep->add_option("--alpha-max", s_max, "Grid end (radians)");
    sweep->add_option("--restarts", s_restarts, "Random restarts per grid point");
    sweep->add_option("--seed", s_seed, "RNG seed");
    sweep->add_option("--plane", s_plane, "auto, on or off");
    sweep->add_option("--out", s_out, "Write the curve CSV here");
    sweep->add_option("--json", s_json, "Write the full JSON result here");

    app.add_subcommand("demo-points", "Print the showcase points and their inequality values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (enumerate->parsed()) return cmd_enumerate(scenario_tag, resource, out_path);
        if (verify->parsed()) return cmd_verify(v_ineq, v_resource, v_points, v_out);
        if (optimize->parsed())
            return cmd_optimize(o_ineq, o_alpha, o_restarts, o_seed, o_plane, o_out);
        if (sweep->parsed())
            return cmd_sweep(s_ineq, s_steps, s_min, s_max, s_restarts, s_seed, s_plane, s_out,
                             s_json);
        return cmd_demo_points();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
