// projlab command-line front end:
//   projlab run <config.json> [--out DIR]
//   projlab preset <name[,name...]> [--out DIR] [--jobs N] [--list] [--print]
//   projlab diagnose <dir> [--angle] [--rate] [--three-point c gamma]
//                          [--four-point ell] [--holder c sigma]
//   projlab reach <set.json> <point> <direction> [--rmax R] [--tol T]
#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include <projlab/projlab.hpp>

using namespace projlab;

namespace {

Point parse_point(const std::string& csv)
{
    Point p;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) p.push_back(std::stod(item));
    if (p.empty()) throw Error("could not parse point '" + csv + "'");
    return p;
}

int cmd_run_file(const std::string& path, const std::string& outdir,
                 std::optional<long> max_iter_override)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open config file '" << path << "'\n";
        return 1;
    }
    json config = json::parse(in, nullptr, false);
    if (config.is_discarded()) {
        std::cerr << "error: '" << path << "' is not valid JSON\n";
        return 1;
    }
    if (max_iter_override) config["tolerances"]["max_iter"] = *max_iter_override;
    RunOutcome out = run_config(config, outdir);
    std::cout << out.summary.dump(2) << "\n";
    return out.exit_code;
}

int run_one_preset(const std::string& name, const std::string& outdir,
                   std::optional<long> max_iter_override)
{
    json config = preset_config(name);
    if (max_iter_override) config["tolerances"]["max_iter"] = *max_iter_override;
    RunOutcome out = run_config(config, outdir);
    std::cout << "[" << name << "] " << out.summary.dump(2) << "\n";
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"alternating-projection experiments"};
    app.require_subcommand(1);

    // run
    std::string config_path, out_dir = "out";
    std::optional<long> max_iter_override;
    auto* run = app.add_subcommand("run", "execute a JSON experiment config");
    run->add_option("config", config_path, "path to config.json")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--max-iter", max_iter_override, "override max_iter");

    // preset
    std::string preset_name;
    std::string preset_out = "out";
    int jobs = 1;
    bool list = false, print_only = false;
    std::optional<long> preset_max_iter;
    auto* preset = app.add_subcommand("preset", "run a named registry preset");
    preset->add_option("name", preset_name, "preset name(s), comma separated");
    preset->add_option("--out", preset_out, "output directory (per-preset subdirs for lists)");
    preset->add_option("--jobs", jobs, "run independent presets concurrently");
    preset->add_option("--max-iter", preset_max_iter, "override max_iter");
    preset->add_flag("--list", list, "list preset names");
    preset->add_flag("--print", print_only, "print the config instead of running");

    // diagnose
    std::string diag_dir;
    bool want_angle = false, want_rate = false;
    std::vector<double> three_point, holder;
    std::optional<double> four_point;
    auto* diagnose = app.add_subcommand("diagnose", "recompute diagnostics from a run directory");
    diagnose->add_option("dir", diag_dir, "run output directory")->required();
    diagnose->add_flag("--angle", want_angle, "fit the angle exponent");
    diagnose->add_flag("--rate", want_rate, "fit the convergence rate");
    diagnose->add_option("--three-point", three_point, "c gamma")->expected(2);
    diagnose->add_option("--four-point", four_point, "ell");
    diagnose->add_option("--holder", holder, "c sigma")->expected(2);

    // reach
    std::string set_path, point_csv, dir_csv;
    double rmax = 1e3, rtol = 1e-8;
    auto* reach = app.add_subcommand("reach", "reach of a set at a point along a direction");
    reach->add_option("set", set_path, "set spec JSON file")->required();
    reach->add_option("point", point_csv, "base point, comma separated")->required();
    reach->add_option("direction", dir_csv, "unit direction, comma separated")->required();
    reach->add_option("--rmax", rmax, "infinite-reach cutoff");
    reach->add_option("--tol", rtol, "absolute accuracy");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run_file(config_path, out_dir, max_iter_override);

        if (*preset) {
            if (list) {
                for (const auto& n : preset_names()) std::cout << n << "\n";
                return 0;
            }
            if (preset_name.empty()) {
                std::cerr << "error: preset name required (or --list)\n";
                return 1;
            }
            std::vector<std::string> names;
            std::stringstream ss(preset_name);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) names.push_back(item);
            if (print_only) {
                for (const auto& n : names) std::cout << preset_config(n).dump(2) << "\n";
                return 0;
            }
            if (names.size() == 1) return run_one_preset(names[0], preset_out, preset_max_iter);
            std::vector<int> codes(names.size(), 0);
            std::vector<std::thread> pool;
            std::size_t next = 0;
            std::mutex mu;
            auto worker = [&]() {
                while (true) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lock(mu);
                        if (next >= names.size()) return;
                        i = next++;
                    }
                    codes[i] = run_one_preset(names[i], preset_out + "/" + names[i],
                                              preset_max_iter);
                }
            };
            for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
            int rc = 0;
            for (int c : codes) rc = std::max(rc, c);
            return rc;
        }

        if (*diagnose) {
            DiagnoseRequest req;
            req.angle = want_angle;
            req.rate = want_rate;
            if (three_point.size() == 2) req.three_point = {three_point[0], three_point[1]};
            if (four_point) req.four_point = four_point;
            if (holder.size() == 2) req.holder = {holder[0], holder[1]};
            json out = diagnose_dir(diag_dir, req);
            std::ofstream f(diag_dir + "/diagnostics.json");
            f << out.dump(2) << "\n";
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*reach) {
            std::ifstream in(set_path);
            if (!in) {
                std::cerr << "error: cannot open set spec '" << set_path << "'\n";
                return 1;
            }
            json spec = json::parse(in);
            SetDescriptor set = set_from_json(spec);
            const Point b = parse_point(point_csv);
            Point d = parse_point(dir_csv);
            const double nd = norm(d);
            if (nd == 0.0) throw Error("direction must be nonzero");
            d = (1.0 / nd) * d;
            const double R = reach_along(set, b, d, rmax, rtol);
            if (R == kReachInfinite)
                std::cout << "infinite(>=" << fmt17(rmax) << ")\n";
            else
                std::cout << fmt17(R) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
