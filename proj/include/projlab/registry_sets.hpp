// JSON construction of catalog sets, priors and interval unions.
#pragma once

#include <json.hpp>

#include "phase.hpp"
#include "sets.hpp"

namespace projlab {

inline std::vector<IntervalUnion> intervals_from_json(const nlohmann::ordered_json& j)
{
    if (!j.is_array()) throw Error("config: interval unions must be an array per coordinate");
    std::vector<IntervalUnion> out;
    for (const auto& coord : j) {
        IntervalUnion u;
        for (const auto& iv : coord) {
            if (!iv.is_array() || iv.size() != 2)
                throw Error("config: interval must be [lo, hi]");
            u.intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
        }
        u.validate();
        out.push_back(std::move(u));
    }
    return out;
}

inline SetDescriptor set_from_json(const nlohmann::ordered_json& j)
{
    using nlohmann::ordered_json;
    if (!j.is_object() || !j.contains("family"))
        throw Error("config: set spec must be an object with a 'family' field");
    const std::string family = j.at("family").get<std::string>();
    auto get = [&](const char* key) -> const ordered_json& {
        if (!j.contains(key))
            throw Error("config: set family '" + family + "' is missing field '" + key + "'");
        return j.at(key);
    };

    if (family == "affine")
        return make_affine_set(get("offset").get<Point>(),
                               get("basis").get<std::vector<Point>>());
    if (family == "epigraph-quadratic")
        return make_epigraph_set(get("a0").get<double>(), get("a2").get<double>());
    if (family == "cylinder")
        return make_cylinder_set();
    if (family == "sphere-product") {
        MagnitudeSpec m{get("m").get<std::vector<double>>()};
        SetDescriptor s = j.value("fourier", false) ? make_magnitude_set(m)
                                                    : make_sphere_product_set(m);
        if (j.contains("center")) s = translate_set(std::move(s), j.at("center").get<Point>());
        return s;
    }
    if (family == "low-rank")
        return make_low_rank_set(get("rows").get<int>(), get("cols").get<int>(),
                                 get("r").get<int>());
    if (family == "toeplitz")
        return make_toeplitz_set(get("rows").get<int>(), get("cols").get<int>());
    if (family == "sparsity")
        return make_sparsity_set(get("N").get<int>(), get("k").get<int>());
    if (family == "sparse-phase")
        return make_sparse_phase_set(get("N").get<int>(), get("k").get<int>());
    if (family == "support")
        return make_support_set(get("N").get<int>(), get("S").get<std::vector<int>>());
    if (family == "nonneg-real")
        return make_nonneg_real_set(get("N").get<int>());
    if (family == "box-product")
        return make_box_product_set(intervals_from_json(get("coords")));
    if (family == "lifted")
        return make_lifted_set(get("which").get<std::string>());
    if (family == "product") {
        std::vector<SetDescriptor> comps;
        for (const auto& c : get("components")) comps.push_back(set_from_json(c));
        return make_product_set(std::move(comps));
    }
    if (family == "diagonal")
        return make_diagonal_set(get("copies").get<int>(), get("dim").get<int>());
    if (family == "param-curve") {
        const std::string curve = get("curve").get<std::string>();
        const double t_max = j.value("t_max", 40.0);
        const double grid = j.value("grid_step", 1e-3);
        const int refine = j.value("refine_iters", 100);
        if (curve == "spiral") return make_spiral_set(t_max, grid, refine);
        if (curve == "double-spiral") return make_double_spiral_set(t_max, grid, refine);
        if (curve == "power")
            return make_power_curve_set(get("alpha").get<double>(), j.value("quad", 0.0),
                                        j.value("lift", 0.0), j.value("half_width", 2.0),
                                        grid, refine);
        if (curve == "line") {
            const Point p0 = get("p0").get<Point>();
            const Point dir = get("dir").get<Point>();
            const double hw = j.value("half_width", 50.0);
            ParamCurve c;
            c.map = [p0, dir](double t) { return p0 + t * dir; };
            c.t_min = -hw;
            c.t_max = hw;
            c.grid_step = j.value("grid_step", 0.05);
            c.refine_iters = refine;
            return make_curve_set(std::move(c), "line-curve");
        }
        throw Error("config: unknown curve '" + curve + "'");
    }
    throw Error("config: unknown set family '" + family + "'");
}

inline PriorSpec prior_from_json(const nlohmann::ordered_json& j)
{
    PriorSpec p;
    const std::string kind = j.value("kind", "");
    if (kind == "second-plane") {
        p.kind = PriorSpec::Kind::second_plane;
        p.m_tilde = j.at("m_tilde").get<std::vector<double>>();
    } else if (kind == "support") {
        p.kind = PriorSpec::Kind::support;
        p.support = j.at("S").get<std::vector<int>>();
    } else if (kind == "nonneg-real") {
        p.kind = PriorSpec::Kind::nonneg_real;
    } else if (kind == "sparsity") {
        p.kind = PriorSpec::Kind::sparsity;
        p.k = j.at("k").get<int>();
    } else if (kind == "sparse-phase") {
        p.kind = PriorSpec::Kind::sparse_phase;
        p.k = j.at("k").get<int>();
    } else if (kind == "lifted-spiral") {
        p.kind = PriorSpec::Kind::lifted_spiral;
    } else if (kind == "lifted-double-spiral") {
        p.kind = PriorSpec::Kind::lifted_double_spiral;
    } else {
        throw Error("config: unknown prior kind '" + kind + "'");
    }
    return p;
}

} // namespace projlab
