// Named experiment presets.  Each preset is an ordinary run config; numeric
// start points are embedded with full precision so reruns are byte-identical.
#pragma once

#include "runner.hpp"

namespace projlab {

inline json preset_config(const std::string& name)
{
    json c;
    c["name"] = name;
    c["seed"] = 7;

    if (name == "parabola-gap") {
        c["algorithm"] = "ap";
        c["sets"] = {
            {{"family", "affine"}, {"offset", {0.0, 0.0}}, {"basis", {{1.0, 0.0}}}},
            {{"family", "epigraph-quadratic"}, {"a0", 1.0}, {"a2", 1.0}},
        };
        c["start"] = {1.0, 0.0};
        c["tolerances"] = {{"tol_step", 1e-13}, {"max_iter", 100000}};
        c["diag"] = {{"drop_tail", 0.2}, {"cluster_radius", 0.1}};
        return c;
    }
    if (name == "parabola-tangent") {
        c["algorithm"] = "ap";
        c["sets"] = {
            {{"family", "affine"}, {"offset", {0.0, 0.0}}, {"basis", {{1.0, 0.0}}}},
            {{"family", "epigraph-quadratic"}, {"a0", 0.0}, {"a2", 1.0}},
        };
        c["start"] = {1.0, 0.0};
        c["tolerances"] = {{"tol_step", 1e-15}, {"max_iter", 100000}};
        c["diag"] = {{"drop_tail", 0.9}, {"cluster_radius", 0.1}};
        return c;
    }
    if (name == "spiral") {
        c["algorithm"] = "ap";
        c["sets"] = {
            {{"family", "param-curve"}, {"curve", "spiral"}},
            {{"family", "cylinder"}},
        };
        c["start"] = spiral_point(1.0);
        c["tolerances"] = {{"tol_step", 1e-300}, {"max_iter", 100000}};
        c["diag"] = {{"tail_fraction", 1.0}, {"cluster_radius", 0.2}, {"drop_tail", 0.5}};
        return c;
    }
    if (name == "double-spiral") {
        c["algorithm"] = "ap";
        c["sets"] = {
            {{"family", "param-curve"}, {"curve", "double-spiral"}},
            {{"family", "cylinder"}},
        };
        c["start"] = inner_spiral_point(1.0);
        c["tolerances"] = {{"tol_step", 1e-300}, {"max_iter", 10000}};
        c["diag"] = {{"tail_fraction", 1.0}, {"cluster_radius", 0.2}, {"drop_tail", 0.5}};
        return c;
    }
    if (name == "gs-2pixel") {
        c["algorithm"] = "ap";
        c["sets"] = {
            {{"family", "lifted"}, {"which", "spiral"}},
            {{"family", "lifted"}, {"which", "cylinder"}},
        };
        c["start"] = LiftMaps::lift(spiral_point(1.0));
        c["tolerances"] = {{"tol_step", 1e-300}, {"max_iter", 10000}};
        c["diag"] = {{"tail_fraction", 1.0}, {"cluster_radius", 0.2}, {"drop_tail", 0.5}};
        return c;
    }
    if (name == "hio-2pixel") {
        c["algorithm"] = "dr";
        c["sets"] = {
            {{"family", "lifted"}, {"which", "double-spiral"}},
            {{"family", "lifted"}, {"which", "cylinder"}},
        };
        c["start"] = LiftMaps::lift(inner_spiral_point(1.0));
        c["tolerances"] = {{"tol_step", 1e-300}, {"max_iter", 10000}};
        c["diag"] = {{"tail_fraction", 1.0}, {"cluster_radius", 0.2}, {"drop_tail", 0.5}};
        return c;
    }
    if (name == "cadzow-ex2") {
        c["algorithm"] = "cadzow";
        c["rows"] = 2;
        c["cols"] = 2;
        c["rank"] = 1;
        c["structure"] = {{"family", "affine"},
                          {"offset", {1.0, -1.0, 2.0, -2.0}},
                          {"basis", {{1.0, 0.0, 1.0, 1.0}}}};
        c["S0"] = {1.5, -1.0, 2.5, -1.5};   // offset + 0.5 * basis direction
        c["tolerances"] = {{"tol_step", 1e-13}, {"max_iter", 100000}};
        c["diag"] = {{"drop_tail", 0.9}, {"cluster_radius", 0.1}};
        return c;
    }
    if (name == "cadzow-escape") {
        c["algorithm"] = "cadzow";
        c["rows"] = 2;
        c["cols"] = 2;
        c["rank"] = 1;
        c["structure"] = {{"family", "affine"},
                          {"offset", {0.0, 1.0, 1.0, 0.0}},
                          {"basis", {{1.0, 0.0, 0.0, 0.0}}}};
        c["S0"] = {1.0, 1.0, 1.0, 0.0};
        c["tolerances"] = {{"tol_step", 1e-15}, {"max_iter", 10000}};
        c["diag"] = {{"drop_tail", 0.5}, {"cluster_radius", 0.1}};
        return c;
    }
    if (name == "cadzow-denoise-demo") {
        std::vector<double> sig(48);
        for (std::size_t t = 0; t < sig.size(); ++t)
            sig[t] = std::sin(2.0 * M_PI * 3.0 * double(t) / double(sig.size()));
        c["algorithm"] = "cadzow";
        c["signal"] = sig;
        c["noise"] = {{"sigma", 0.1}};
        c["window"] = 24;
        c["rank"] = 2;
        c["tolerances"] = {{"tol_step", 1e-12}, {"max_iter", 20000}};
        c["diag"] = {{"drop_tail", 0.5}};
        return c;
    }
    if (name == "em-demo") {
        c["algorithm"] = "em";
        c["C"] = {{1.0, 1.0}};
        c["y"] = {4.0};
        c["omega"] = json::parse("[[[0,0],[1,2]],[[0,0],[1,2]]]");
        c["x0"] = {0.0, 1.5};
        c["tolerances"] = {{"tol_step", 1e-12}, {"max_iter", 10000}};
        return c;
    }
    if (name == "averaged-demo") {
        c["algorithm"] = "averaged";
        c["components"] = {
            {{"family", "sphere-product"}, {"m", {1.0}}},
            {{"family", "sphere-product"}, {"m", {1.0}}, {"center", {2.0, 0.0}}},
            {{"family", "sphere-product"}, {"m", {1.0}}, {"center", {0.0, 2.0}}},
        };
        c["start_seeded"] = {{"dim", 2}, {"scale", 1.5}};
        c["tolerances"] = {{"tol_step", 1e-12}, {"max_iter", 10000}};
        return c;
    }
    throw Error("unknown preset '" + name + "'");
}

inline std::vector<std::string> preset_names()
{
    return {"parabola-gap",  "parabola-tangent", "spiral",
            "double-spiral", "gs-2pixel",        "hio-2pixel",
            "cadzow-ex2",    "cadzow-escape",    "cadzow-denoise-demo",
            "em-demo",       "averaged-demo"};
}

} // namespace projlab
