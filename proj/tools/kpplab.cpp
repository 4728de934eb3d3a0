// kpplab command line: simulate / geometry / fronts / diagnose / scenario.
// Exit codes: 0 success, 1 on FAIL verdicts, 2 on errors.

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "kpplab/diagnostics.hpp"
#include "kpplab/kppg.hpp"
#include "kpplab/scenarios.hpp"

using namespace kpplab;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "kpplab 1.0.0";

std::string timestamp_now() {
    auto t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%S", std::gmtime(&t));
    return buf;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << "\n";
}

SetDescriptor load_descriptor(const std::string& path) {
    json j = load_json(path);
    if (j.value("kind", "") == "raster" && j.contains("kppg")) {
        fs::path base = fs::path(path).parent_path();
        return SetDescriptor::raster(
            kppg_read_mask((base / j["kppg"].get<std::string>()).string()));
    }
    return descriptor_from_json(j);
}

VecN parse_point(const std::string& s) {
    std::vector<double> v;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        v.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    VecN p(static_cast<int>(v.size()));
    for (int i = 0; i < p.dim; ++i) p[i] = v[i];
    return p;
}

Box parse_box(const std::string& s) {
    VecN all = parse_point(s);
    int d = all.dim / 2;
    Box b{VecN(d), VecN(d)};
    for (int i = 0; i < d; ++i) {
        b.lo[i] = all[i];
        b.hi[i] = all[d + i];
    }
    return b;
}

void write_manifest(const fs::path& dir, const json& config, uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    json m;
    m["tool"] = kVersion;
    m["config_hash"] = fnv1a(config.dump());
    m["created"] = timestamp_now();
    m["seed"] = seed;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    save_json((dir / "manifest.json").string(), m);
}

std::vector<GridField> read_snapshot_dir(const std::string& dir) {
    std::vector<std::string> files;
    for (auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".kppg" && kppg_peek_payload(e.path().string()) == 1)
            files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    std::vector<GridField> snaps;
    for (auto& f : files) snaps.push_back(kppg_read_field(f));
    std::sort(snaps.begin(), snaps.end(),
              [](const GridField& a, const GridField& b) { return a.time < b.time; });
    if (snaps.empty()) throw ConfigError("no field snapshots under " + dir);
    return snaps;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, bool sequential) {
    json cfg = load_json(config_path);
    SetDescriptor U = descriptor_from_json(cfg.at("descriptor"));
    GridSpec grid = gridspec_from_json(cfg.at("grid"));
    SolverConfig scfg = solvercfg_from_json(cfg.at("solver"));
    auto f = ReactionFn::by_name(cfg.value("reaction", "logistic"));
    uint64_t seed = cfg.value("seed", 42);
    scfg.threads = sequential ? 1 : 0;

    fs::path dir = fs::path(out_dir) / "simulate" / timestamp_now();
    fs::create_directories(dir);
    std::vector<std::string> outputs;
    int counter = 0;
    run(rasterize(U, grid), f, scfg, [&](const GridField& s) {
        char name[64];
        std::snprintf(name, sizeof(name), "snap_%06d.kppg", counter++);
        std::string p = (dir / name).string();
        kppg_write_field(p, s);
        outputs.push_back(name);
        std::cout << "wrote " << p << " (t=" << s.time << ")\n";
    });
    write_manifest(dir, cfg, seed, {config_path}, outputs);
    std::cout << "manifest: " << (dir / "manifest.json").string() << "\n";
    return 0;
}

int cmd_scenario_run(const std::string& id, const std::string& out_dir, bool sequential,
                     bool skip_doubling) {
    std::vector<Scenario> list;
    if (id == "all")
        list = builtin_catalog();
    else
        list.push_back(catalog_scenario(id));

    ScenarioRunOptions opts;
    opts.threads = sequential ? 1 : 0;
    opts.with_doubling = !skip_doubling;

    bool any_fail = false;
    for (const auto& sc : list) {
        std::cout << "running scenario " << sc.id << " ..." << std::flush;
        auto outcome = run_scenario(sc, opts);
        fs::path dir = fs::path(out_dir) / sc.id / timestamp_now();
        fs::create_directories(dir);
        save_json((dir / "report.json").string(), outcome.to_json());
        std::ofstream summary(dir / "summary.txt");
        summary << sc.id << ": " << (outcome.pass() ? "PASS" : "FAIL") << "\n";
        for (const auto& c : outcome.checks)
            summary << "  " << c.verdict << " " << c.name << " value=" << c.value
                    << " threshold=" << c.threshold << " (" << c.detail << ")\n";
        write_manifest(dir, sc.to_json(), sc.seed, {}, {"report.json", "summary.txt"});
        std::cout << " " << (outcome.pass() ? "PASS" : "FAIL") << "\n";
        for (const auto& c : outcome.checks)
            std::cout << "  " << c.verdict << " " << c.name << " (value " << c.value << ")\n";
        if (!outcome.pass()) any_fail = true;
    }
    return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - a numerical laboratory for reaction-diffusion front geometry"};
    app.require_subcommand(1);
    bool sequential = false;
    app.add_flag("--sequential", sequential, "force the single-threaded reference mode");

    // simulate
    auto* sim = app.add_subcommand("simulate", "integrate u_t = Lap u + f(u) from 1_U");
    std::string sim_config, sim_out = "out";
    sim->add_option("--config", sim_config, "config JSON")->required();
    sim->add_option("--out", sim_out, "output directory");

    // geometry
    auto* geo = app.add_subcommand("geometry", "set-geometry queries");
    geo->require_subcommand(1);
    std::string geo_set, geo_point = "0,1", geo_out = "eroded.json", geo_window;
    std::string geo_set_b;
    double geo_delta = 1.0, geo_r = 50.0, geo_sample_h = 0.05, geo_raster_h = 0.1;
    int geo_samples = 512;
    auto* g_open = geo->add_subcommand("opening", "opening function at a point");
    g_open->add_option("--set", geo_set)->required();
    g_open->add_option("--point", geo_point)->required();
    auto* g_erode = geo->add_subcommand("erode", "positive-distance interior U_delta");
    g_erode->add_option("--set", geo_set)->required();
    g_erode->add_option("--delta", geo_delta)->required();
    g_erode->add_option("--out", geo_out);
    g_erode->add_option("--window", geo_window, "lo...,hi... for the raster fallback");
    g_erode->add_option("--spacing", geo_raster_h, "raster fallback spacing");
    auto* g_haus = geo->add_subcommand("hausdorff", "windowed Hausdorff distance");
    g_haus->add_option("--set-a", geo_set)->required();
    g_haus->add_option("--set-b", geo_set_b)->required();
    g_haus->add_option("--window", geo_window)->required();
    g_haus->add_option("--sample-h", geo_sample_h);
    auto* g_pe = geo->add_subcommand("predict-e", "direction-set estimate at distance R");
    g_pe->add_option("--set", geo_set)->required();
    g_pe->add_option("--r", geo_r);
    g_pe->add_option("--samples", geo_samples);

    // fronts
    auto* fr = app.add_subcommand("fronts", "traveling fronts and supersolutions");
    fr->require_subcommand(1);
    std::string fr_reaction = "logistic", fr_out;
    double fr_c = 2.0, fr_zstep = 0.005, fr_lambda = 0.1, fr_eps = 0.2, fr_T = 10.0;
    int fr_dim = 2;
    auto* f_prof = fr->add_subcommand("profile", "shoot the traveling-front profile");
    f_prof->add_option("--reaction", fr_reaction);
    f_prof->add_option("--c", fr_c)->required();
    f_prof->add_option("--zstep", fr_zstep);
    f_prof->add_option("--out", fr_out);
    auto* f_super = fr->add_subcommand("supersolution", "retracting multi-front supersolution");
    f_super->add_option("--reaction", fr_reaction);
    f_super->add_option("--c", fr_c)->required();
    f_super->add_option("--lambda", fr_lambda);
    f_super->add_option("--eps", fr_eps);
    f_super->add_option("--horizon", fr_T);
    f_super->add_option("--dim", fr_dim);
    f_super->add_option("--out", fr_out);

    // diagnose
    auto* di = app.add_subcommand("diagnose", "snapshot diagnostics");
    di->require_subcommand(1);
    std::string di_dir, di_point = "0,0", di_dirn = "0,1", di_set, di_out;
    double di_radius = -1.0, di_level = 0.5, di_half = 10.0, di_cref = 0.0, di_c = 2.0;
    int di_k = 2;
    std::string di_window;
    auto* d_sigma = di->add_subcommand("sigma", "sup |sigma_k| time series");
    d_sigma->add_option("--snapshots", di_dir)->required();
    d_sigma->add_option("--k", di_k);
    d_sigma->add_option("--window", di_window)->required();
    d_sigma->add_option("--out", di_out, "CSV output (t, value, argmax)");
    auto* d_plan = di->add_subcommand("planarity", "planarity defect time series");
    d_plan->add_option("--snapshots", di_dir)->required();
    d_plan->add_option("--point", di_point)->required();
    d_plan->add_option("--radius", di_radius);
    d_plan->add_option("--out", di_out);
    auto* d_speed = di->add_subcommand("speed", "level-set reach fit (c, ln t, shift)");
    d_speed->add_option("--snapshots", di_dir)->required();
    d_speed->add_option("--set", di_set, "anchor descriptor JSON")->required();
    d_speed->add_option("--level", di_level);
    d_speed->add_option("--c-ref", di_cref);
    auto* d_prof = di->add_subcommand("profile", "extract a 1D profile and compare to phi");
    d_prof->add_option("--snapshots", di_dir)->required();
    d_prof->add_option("--point", di_point)->required();
    d_prof->add_option("--dir", di_dirn);
    d_prof->add_option("--half-length", di_half);
    d_prof->add_option("--c", di_c);
    d_prof->add_option("--out", di_out);

    // scenario
    auto* sc = app.add_subcommand("scenario", "named experiment presets");
    sc->require_subcommand(1);
    std::string sc_id = "all", sc_out = "out", sc_dir = "scenarios";
    bool sc_skip_doubling = false;
    auto* s_run = sc->add_subcommand("run", "run a scenario (or 'all')");
    s_run->add_option("id", sc_id, "scenario id or 'all'");
    s_run->add_option("--out", sc_out);
    s_run->add_flag("--skip-doubling", sc_skip_doubling,
                    "skip the domain-doubling contamination check");
    auto* s_list = sc->add_subcommand("list", "list catalog ids");
    (void)s_list;
    auto* s_dump = sc->add_subcommand("dump-catalog", "write catalog JSON files");
    s_dump->add_option("--dir", sc_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_config, sim_out, sequential);

        if (*geo) {
            if (*g_open) {
                auto U = load_descriptor(geo_set);
                std::cout << "opening = " << opening(U, parse_point(geo_point)) << "\n";
                return 0;
            }
            if (*g_erode) {
                auto U = load_descriptor(geo_set);
                SetDescriptor e = geo_window.empty()
                                      ? erode(U, geo_delta)
                                      : erode(U, geo_delta,
                                              RasterWindow{parse_box(geo_window), geo_raster_h});
                if (e.kind() == SetKind::Raster) {
                    std::string mask_path = geo_out + ".kppg";
                    kppg_write_mask(mask_path, e.mask());
                    save_json(geo_out, json{{"kind", "raster"},
                                            {"dim", e.dim()},
                                            {"kppg", fs::path(mask_path).filename().string()}});
                } else {
                    save_json(geo_out, descriptor_to_json(e));
                }
                std::cout << "wrote " << geo_out << "\n";
                return 0;
            }
            if (*g_haus) {
                auto A = load_descriptor(geo_set);
                auto B = load_descriptor(geo_set_b);
                double d = hausdorff(A, B, parse_box(geo_window), geo_sample_h);
                std::cout << "hausdorff = " << d << " (window " << geo_window
                          << ", sample spacing " << geo_sample_h << ")\n";
                return 0;
            }
            if (*g_pe) {
                auto U = load_descriptor(geo_set);
                auto est = predict_E(U, geo_r, geo_samples);
                std::cout << "directions: " << est.directions.size()
                          << ", clusters: " << est.clusters.size() << "\n";
                for (const auto& c : est.clusters) {
                    std::cout << "  cluster:";
                    for (int i = 0; i < c.dim; ++i) std::cout << " " << c[i];
                    std::cout << "\n";
                }
                if (U.dim() == 2)
                    std::cout << "max angular gap = " << est.max_angular_gap_2d() * 180.0 / M_PI
                              << " deg\n";
                return 0;
            }
        }

        if (*fr) {
            auto f = ReactionFn::by_name(fr_reaction);
            if (*f_prof) {
                auto prof = shoot_profile(f, fr_c, fr_zstep);
                std::cout << "profile: c=" << fr_c << " nodes=" << prof.size()
                          << " residual=" << prof.ode_residual(f)
                          << " fd-crosscheck=" << prof.fd_crosscheck(f) << "\n";
                if (!fr_out.empty()) {
                    prof.write_csv(fr_out);
                    std::cout << "wrote " << fr_out << "\n";
                }
                return 0;
            }
            if (*f_super) {
                auto prof = shoot_profile(f, minimal_speed(f), fr_zstep);
                auto v = build_supersolution(prof, f, fr_lambda, fr_c, fr_T, fr_eps, fr_dim);
                std::cout << "supersolution: R=" << v.shift_R() << " n=" << v.directions().size()
                          << " v(0,0)=" << v.eval(0.0, VecN::of_dim(fr_dim)) << "\n";
                if (!fr_out.empty()) {
                    json j{{"lambda", fr_lambda}, {"c", fr_c},    {"eps", fr_eps},
                           {"horizon", fr_T},     {"dim", fr_dim}, {"R", v.shift_R()},
                           {"reaction", fr_reaction}};
                    json dirs = json::array();
                    for (const auto& d : v.directions()) dirs.push_back(to_json(d));
                    j["directions"] = dirs;
                    save_json(fr_out, j);
                    std::cout << "wrote " << fr_out << "\n";
                }
                return 0;
            }
        }

        if (*di) {
            auto snaps = read_snapshot_dir(di_dir);
            if (*d_sigma) {
                Box w = parse_box(di_window);
                std::ofstream csv;
                if (!di_out.empty()) {
                    csv.open(di_out);
                    csv << "t,value,argmax_x1,argmax_x2\n";
                }
                for (const auto& s : snaps) {
                    if (s.time < 1.0) continue;
                    auto r = hessian_sigma(s, di_k, w);
                    std::cout << "t=" << s.time << " sup|sigma_" << di_k << "|=" << r.sup_abs
                              << " at (" << r.argmax[0] << "," << r.argmax[1] << ")\n";
                    if (csv.is_open())
                        csv << s.time << "," << r.sup_abs << "," << r.argmax[0] << ","
                            << r.argmax[1] << "\n";
                }
                return 0;
            }
            if (*d_plan) {
                VecN p = parse_point(di_point);
                std::ofstream csv;
                if (!di_out.empty()) {
                    csv.open(di_out);
                    csv << "t,value,x1,x2\n";
                }
                for (const auto& s : snaps) {
                    double d = planarity_defect(s, p, di_radius);
                    std::cout << "t=" << s.time << " defect=" << d << "\n";
                    if (csv.is_open())
                        csv << s.time << "," << d << "," << p[0] << "," << p[1] << "\n";
                }
                return 0;
            }
            if (*d_speed) {
                auto U = load_descriptor(di_set);
                std::vector<std::pair<double, double>> curve;
                for (const auto& s : snaps)
                    curve.push_back({s.time, level_set_radius(s, di_level, U)});
                auto fit = fit_front_position(curve, di_cref);
                std::cout << "cFit=" << fit.c_fit << " logCoefFit=" << fit.log_coef
                          << " shiftFit=" << fit.shift_fit << "\n";
                return 0;
            }
            if (*d_prof) {
                auto f = ReactionFn::logistic();
                auto prof = extract_profile(snaps.back(), parse_point(di_point),
                                            parse_point(di_dirn), di_half);
                auto phi = shoot_profile(f, di_c, 0.005);
                std::cout << "sup distance to phi after shift = "
                          << profile_sup_distance(prof, phi) << "\n";
                if (!di_out.empty()) {
                    std::ofstream csv(di_out);
                    csv << "s,u\n";
                    for (auto& [s, u] : prof) csv << s << "," << u << "\n";
                    std::cout << "wrote " << di_out << "\n";
                }
                return 0;
            }
        }

        if (*sc) {
            if (*s_list) {
                for (const auto& s : builtin_catalog())
                    std::cout << s.id << "  - " << s.claim << "\n";
                return 0;
            }
            if (*s_dump) {
                fs::create_directories(sc_dir);
                for (const auto& s : builtin_catalog()) {
                    std::string p = (fs::path(sc_dir) / (s.id + ".json")).string();
                    save_json(p, s.to_json());
                    std::cout << "wrote " << p << "\n";
                }
                return 0;
            }
            if (*s_run) return cmd_scenario_run(sc_id, sc_out, sequential, sc_skip_doubling);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
