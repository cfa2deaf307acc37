// rodlab: command-line front end for the exact hard-rod propagator.
//
// Subcommands: trajectory | compare | liouville | bench | classify.
// Exit codes: 0 success, 2 bad datum / validation, 3 I/O, 4 acceptance
// failure in compare/liouville.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hardrods/dynamics.hpp"
#include "hardrods/measure.hpp"
#include "hardrods/oracle.hpp"

using json = nlohmann::ordered_json;
using namespace hardrods;

namespace {

constexpr int kExitBadDatum = 2;
constexpr int kExitIo = 3;
constexpr int kExitAcceptance = 4;

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Options {
    int n = 2;
    double radius = 0.0;
    std::vector<double> x0;
    std::vector<double> v0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double t_start = 0.0;
    double t_end = 1.0;
    int steps = 100;
    std::string format = "csv";
    std::string out;
    std::vector<double> box;
    std::uint64_t samples = 100000;
    double beta = 0.0;
    bool strict = false;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--n", opt.n, "number of rods");
    cmd->add_option("--radius", opt.radius, "rod radius r (diameter 2r)");
    cmd->add_option("--x0", opt.x0, "initial positions (comma separated)")
        ->delimiter(',');
    cmd->add_option("--v0", opt.v0, "initial velocities (comma separated)")
        ->delimiter(',');
    cmd->add_option("--seed", opt.seed, "RNG seed (fallback: env ROD_SEED)");
    cmd->add_option("--t-start", opt.t_start, "grid start time");
    cmd->add_option("--t-end", opt.t_end, "grid end time");
    cmd->add_option("--steps", opt.steps, "number of grid intervals");
    cmd->add_option("--out", opt.out, "output file (default: stdout)");
    cmd->add_flag("--strict", opt.strict, "classify the datum and refuse bad ones");
}

void resolve_seed(CLI::App* cmd, Options& opt) {
    if (cmd->count("--seed") > 0) {
        opt.seed_given = true;
        return;
    }
    if (const char* env = std::getenv("ROD_SEED")) {
        opt.seed = std::strtoull(env, nullptr, 10);
        opt.seed_given = true;
    }
}

PhaseState resolve_datum(const RodGeometry& geom, Options& opt) {
    if (!opt.x0.empty() || !opt.v0.empty()) {
        if (static_cast<int>(opt.x0.size()) != geom.n() ||
            static_cast<int>(opt.v0.size()) != geom.n())
            throw std::invalid_argument("--x0/--v0 must each have n entries");
        return PhaseState{opt.x0, opt.v0};
    }
    return random_good_datum(geom, opt.seed);
}

std::vector<double> time_grid(const Options& opt) {
    std::vector<double> ts;
    ts.reserve(opt.steps + 1);
    for (int k = 0; k <= opt.steps; ++k) {
        double f = opt.steps == 0 ? 0.0 : static_cast<double>(k) / opt.steps;
        ts.push_back(opt.t_start + f * (opt.t_end - opt.t_start));
    }
    return ts;
}

int write_output(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open " << path << " for writing\n";
        return kExitIo;
    }
    f << body;
    if (!f) {
        std::cerr << "error: write to " << path << " failed\n";
        return kExitIo;
    }
    return 0;
}

json config_json(const RodGeometry& geom, const Options& opt,
                 const PhaseState& z0) {
    json j;
    j["n"] = geom.n();
    j["radius"] = geom.radius();
    j["x0"] = z0.positions;
    j["v0"] = z0.velocities;
    j["seed"] = opt.seed;
    j["t_start"] = opt.t_start;
    j["t_end"] = opt.t_end;
    j["steps"] = opt.steps;
    j["strict"] = opt.strict;
    return j;
}

json schedule_json(const CollisionSchedule& sched) {
    json arr = json::array();
    for (const auto& e : sched.events)
        arr.push_back({{"time", e.time}, {"i", e.i + 1}, {"j", e.j + 1}});
    return arr;
}

std::string render_svg(const RodGeometry& geom, const PhaseState& z0,
                       const std::vector<double>& times) {
    const int width = 800, height = 600, margin = 40;
    const int n = geom.n();
    std::vector<std::vector<double>> rows;
    rows.reserve(times.size());
    for (double t : times) rows.push_back(evaluate_position(geom, z0, t));

    double xmin = rows.front().front(), xmax = xmin;
    for (const auto& row : rows)
        for (double x : row) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    double t0 = times.front(), t1 = times.back();
    if (t1 == t0) t1 = t0 + 1.0;

    auto px = [&](double t) {
        return margin + (t - t0) / (t1 - t0) * (width - 2 * margin);
    };
    auto py = [&](double x) {
        // SVG y grows downward; positions grow upward.
        return height - margin - (x - xmin) / (xmax - xmin) * (height - 2 * margin);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int i = 0; i < n; ++i) {
        svg << "<polyline fill=\"none\" stroke=\"hsl("
            << (i * 360 / std::max(1, n)) << ",60%,40%)\" stroke-width=\"1\" points=\"";
        for (size_t k = 0; k < times.size(); ++k) {
            if (k) svg << ' ';
            svg << fmt17(px(times[k])) << ',' << fmt17(py(rows[k][i]));
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

int run_trajectory(Options& opt) {
    RodGeometry geom(opt.n, opt.radius);
    PhaseState z0 = resolve_datum(geom, opt);
    DatumClass cls = classify_datum(geom, z0);
    if (opt.strict && !cls.good) {
        std::cerr << "error: bad datum (witness time " << cls.witness_time << ")\n";
        return kExitBadDatum;
    }
    std::vector<double> grid = time_grid(opt);

    if (opt.format == "csv") {
        std::ostringstream out;
        out << "t";
        for (int i = 1; i <= geom.n(); ++i) out << ",x_" << i;
        out << "\n";
        for (double t : grid) {
            auto x = evaluate_position(geom, z0, t);
            out << fmt17(t);
            for (double xi : x) out << ',' << fmt17(xi);
            out << "\n";
        }
        return write_output(opt.out, out.str());
    }
    if (opt.format == "json") {
        json doc;
        doc["config"] = config_json(geom, opt, z0);
        doc["schedule"] = schedule_json(collision_schedule(geom, z0));
        json samples = json::array();
        for (double t : grid) {
            auto x = evaluate_position(geom, z0, t);
            auto v = evaluate_velocity(geom, z0, t);
            samples.push_back({{"t", t}, {"x", x}, {"v", v}});
        }
        doc["samples"] = samples;
        return write_output(opt.out, doc.dump(2) + "\n");
    }
    if (opt.format == "svg") {
        // Grid plus all schedule times in the window, so kinks land on
        // emitted points exactly.
        std::set<double> ts(grid.begin(), grid.end());
        for (const auto& e : collision_schedule(geom, z0).events)
            if (e.time >= opt.t_start && e.time <= opt.t_end) ts.insert(e.time);
        std::vector<double> times(ts.begin(), ts.end());
        return write_output(opt.out, render_svg(geom, z0, times));
    }
    std::cerr << "error: unknown format '" << opt.format << "'\n";
    return kExitBadDatum;
}

int run_classify(Options& opt) {
    RodGeometry geom(opt.n, opt.radius);
    PhaseState z0 = resolve_datum(geom, opt);
    DatumClass cls = classify_datum(geom, z0);
    json doc;
    doc["good"] = cls.good;
    if (!cls.good) {
        doc["witness_time"] = cls.witness_time;
        json chain = json::array();
        for (const auto& link : cls.chain) {
            json l = json::array();
            for (int i : link) l.push_back(i + 1);
            chain.push_back(l);
        }
        doc["chain"] = chain;
    }
    int rc = write_output(opt.out, doc.dump(2) + "\n");
    if (rc != 0) return rc;
    return cls.good ? 0 : kExitBadDatum;
}

int run_compare(Options& opt) {
    RodGeometry geom(opt.n, opt.radius);
    PhaseState z0 = resolve_datum(geom, opt);
    DatumClass cls = classify_datum(geom, z0);
    if (!cls.good) {
        std::cerr << "error: classification reports a bad datum, witness time "
                  << cls.witness_time << "\n";
        try {
            simulate_to(geom, z0, opt.t_end);
        } catch (const TripleCollision& e) {
            std::cerr << "error: oracle agrees: " << e.what() << "\n";
        }
        return kExitBadDatum;
    }
    auto [p0, e0] = conserved_quantities(z0.velocities);
    double max_dx = 0.0, max_dv = 0.0, max_dp = 0.0, max_de = 0.0;
    for (double t : time_grid(opt)) {
        auto x = evaluate_position(geom, z0, t);
        auto v = evaluate_velocity(geom, z0, t);
        EventLog log = simulate_to(geom, z0, t);
        for (int i = 0; i < geom.n(); ++i) {
            max_dx = std::max(max_dx, std::fabs(x[i] - log.final_state.positions[i]));
            max_dv = std::max(max_dv, std::fabs(v[i] - log.final_state.velocities[i]));
        }
        auto [p, e] = conserved_quantities(v);
        max_dp = std::max(max_dp, std::fabs(p - p0));
        max_de = std::max(max_de, std::fabs(e - e0));
    }
    json doc;
    doc["config"] = config_json(geom, opt, z0);
    doc["max_position_deviation"] = max_dx;
    doc["max_velocity_deviation"] = max_dv;
    doc["momentum_drift"] = max_dp;
    doc["energy_drift"] = max_de;
    bool pass = max_dx <= 1e-8 && max_dv <= 1e-8;
    doc["pass"] = pass;
    int rc = write_output(opt.out, doc.dump(2) + "\n");
    if (rc != 0) return rc;
    return pass ? 0 : kExitAcceptance;
}

int run_liouville(Options& opt) {
    RodGeometry geom(opt.n, opt.radius);
    if (static_cast<int>(opt.box.size()) != 4 * geom.n()) {
        std::cerr << "error: --box needs 4n numbers: x1lo,x1hi,...,v1lo,v1hi,...\n";
        return kExitBadDatum;
    }
    PhaseBox box;
    for (int i = 0; i < geom.n(); ++i)
        box.position_intervals.push_back({opt.box[2 * i], opt.box[2 * i + 1]});
    for (int i = 0; i < geom.n(); ++i)
        box.velocity_intervals.push_back(
            {opt.box[2 * geom.n() + 2 * i], opt.box[2 * geom.n() + 2 * i + 1]});
    double t = opt.t_end;
    InvarianceReport rep;
    try {
        rep = estimate_pushforward_volume(geom, box, t, opt.samples, opt.seed);
    } catch (const EmptyTarget& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadDatum;
    }
    json doc;
    doc["n"] = geom.n();
    doc["radius"] = geom.radius();
    doc["t"] = rep.t;
    doc["n_samples"] = rep.n_samples;
    doc["seed"] = rep.seed;
    doc["bounding_volume"] = rep.bounding_volume;
    doc["count_before"] = rep.count_before;
    doc["count_after"] = rep.count_after;
    doc["rejected_bad"] = rep.rejected_bad;
    doc["volume_before"] = rep.volume_before;
    doc["stderr_before"] = rep.stderr_before;
    doc["volume_after"] = rep.volume_after;
    doc["stderr_after"] = rep.stderr_after;
    doc["z_score"] = rep.z_score;
    if (opt.beta > 0.0) {
        // Optional canonical-ensemble check on the same position box.
        EnsembleParams params{opt.beta, box.position_intervals};
        auto states = sample_canonical(params, geom, std::min<std::uint64_t>(opt.samples, 100000),
                                       opt.seed + 1);
        double max_energy_drift = 0.0;
        for (const auto& z : states) {
            auto [p0, e0] = conserved_quantities(z.velocities);
            auto vt = evaluate_velocity(geom, z, t);
            auto [p1, e1] = conserved_quantities(vt);
            max_energy_drift = std::max(max_energy_drift, std::fabs(e1 - e0));
        }
        doc["beta"] = opt.beta;
        doc["canonical_samples"] = states.size();
        doc["canonical_max_energy_drift"] = max_energy_drift;
    }
    int rc = write_output(opt.out, doc.dump(2) + "\n");
    if (rc != 0) return rc;
    return rep.z_score < 3.0 ? 0 : kExitAcceptance;
}

int run_bench(Options& opt) {
    const std::vector<int> sizes = {100, 1000, 10000, 100000};
    const int reps = 11;
    std::ostringstream out;
    out << "n,formula_ms,oracle_ms\n";
    for (int n : sizes) {
        RodGeometry geom(n, opt.radius);
        PhaseState z0 = random_good_datum(geom, opt.seed);
        std::vector<double> formula_ms, oracle_ms;
        volatile double sink = 0.0;
        for (int r = 0; r < reps; ++r) {
            auto a = std::chrono::steady_clock::now();
            auto x = evaluate_position(geom, z0, 1.0);
            auto b = std::chrono::steady_clock::now();
            sink = sink + x[0];
            formula_ms.push_back(std::chrono::duration<double, std::milli>(b - a).count());
        }
        if (n <= 10000) {  // oracle replay is O(events * n); skip at 1e5
            for (int r = 0; r < reps; ++r) {
                auto a = std::chrono::steady_clock::now();
                EventLog log = simulate_to(geom, z0, 1.0);
                auto b = std::chrono::steady_clock::now();
                sink = sink + log.final_state.positions[0];
                oracle_ms.push_back(std::chrono::duration<double, std::milli>(b - a).count());
            }
        }
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        out << n << ',' << fmt17(median(formula_ms)) << ',';
        if (!oracle_ms.empty()) out << fmt17(median(oracle_ms));
        out << "\n";
    }
    return write_output(opt.out, out.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact hard-rod dynamics laboratory"};
    app.require_subcommand(1);
    Options opt;

    auto* traj = app.add_subcommand("trajectory", "export a trajectory table or fan plot");
    add_common_flags(traj, opt);
    traj->add_option("--format", opt.format, "csv | json | svg");

    auto* cmp = app.add_subcommand("compare", "formula vs event-driven oracle");
    add_common_flags(cmp, opt);

    auto* liou = app.add_subcommand("liouville", "Monte Carlo pushforward-volume report");
    add_common_flags(liou, opt);
    liou->add_option("--box", opt.box, "4n numbers: position lo/hi pairs then velocity lo/hi pairs")
        ->delimiter(',');
    liou->add_option("--samples", opt.samples, "Monte Carlo sample count");
    liou->add_option("--beta", opt.beta, "also run a canonical-ensemble check at this inverse temperature");

    auto* bench = app.add_subcommand("bench", "formula query vs oracle replay timings");
    add_common_flags(bench, opt);

    auto* cls = app.add_subcommand("classify", "good/bad classification of a datum");
    add_common_flags(cls, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto* c : {traj, cmp, liou, bench, cls})
            if (c->parsed()) resolve_seed(c, opt);
        if (traj->parsed()) return run_trajectory(opt);
        if (cmp->parsed()) return run_compare(opt);
        if (liou->parsed()) return run_liouville(opt);
        if (bench->parsed()) return run_bench(opt);
        if (cls->parsed()) return run_classify(opt);
    } catch (const BadDatumError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadDatum;
    } catch (const TripleCollision& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadDatum;
    } catch (const OrderViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadDatum;
    } catch (const OverlapViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadDatum;
    } catch (const DegenerateLine& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadDatum;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadDatum;
    }
    return 0;
}
