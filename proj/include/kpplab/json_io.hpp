#pragma once

#include <json.hpp>

#include "kpplab/geometry.hpp"

namespace kpplab {

using json = nlohmann::json;

inline json to_json(const VecN& v) {
    json a = json::array();
    for (int i = 0; i < v.dim; ++i) a.push_back(v[i]);
    return a;
}

inline VecN vec_from_json(const json& a) {
    VecN v(static_cast<int>(a.size()));
    for (int i = 0; i < v.dim; ++i) v[i] = a[i].get<double>();
    return v;
}

inline json to_json(const GammaFn& g) {
    json terms = json::array();
    for (const auto& t : g.terms) {
        json jt;
        switch (t.type) {
            case GammaTerm::Type::Const: jt = {{"type", "const"}, {"value", t.a}}; break;
            case GammaTerm::Type::Linear: jt = {{"type", "linear"}, {"slope", t.a}}; break;
            case GammaTerm::Type::Sin:
                jt = {{"type", "sin"}, {"amp", t.a}, {"freq", t.b}, {"phase", t.c}};
                break;
            case GammaTerm::Type::PowAbs:
                jt = {{"type", "pow-abs"}, {"amp", t.a}, {"exp", t.b}};
                break;
        }
        terms.push_back(jt);
    }
    return terms;
}

inline GammaFn gamma_from_json(const json& terms) {
    GammaFn g;
    for (const auto& jt : terms) {
        std::string type = jt.at("type").get<std::string>();
        GammaTerm t;
        if (type == "const") {
            t.type = GammaTerm::Type::Const;
            t.a = jt.at("value").get<double>();
        } else if (type == "linear") {
            t.type = GammaTerm::Type::Linear;
            t.a = jt.at("slope").get<double>();
        } else if (type == "sin") {
            t.type = GammaTerm::Type::Sin;
            t.a = jt.at("amp").get<double>();
            t.b = jt.at("freq").get<double>();
            t.c = jt.value("phase", 0.0);
        } else if (type == "pow-abs") {
            t.type = GammaTerm::Type::PowAbs;
            t.a = jt.at("amp").get<double>();
            t.b = jt.at("exp").get<double>();
        } else {
            throw ConfigError("unknown gamma term type: " + type);
        }
        g.terms.push_back(t);
    }
    return g;
}

json descriptor_to_json(const SetDescriptor& d);
SetDescriptor descriptor_from_json(const json& j);

inline json descriptor_to_json(const SetDescriptor& d) {
    json j;
    j["kind"] = kind_name(d.kind());
    j["dim"] = d.dim();
    switch (d.kind()) {
        case SetKind::Empty: break;
        case SetKind::HalfSpace:
            j["normal"] = to_json(d.faces()[0].normal);
            j["offset"] = d.faces()[0].offset;
            break;
        case SetKind::Ball:
            j["center"] = to_json(d.center());
            j["radius"] = d.radius();
            break;
        case SetKind::Polytope: {
            json faces = json::array();
            for (const auto& f : d.faces())
                faces.push_back({{"normal", to_json(f.normal)}, {"offset", f.offset}});
            j["faces"] = faces;
            break;
        }
        case SetKind::VShape: j["beta"] = d.beta(); break;
        case SetKind::Subgraph: j["gamma"] = to_json(d.gamma()); break;
        case SetKind::Union: {
            json parts = json::array();
            for (const auto& p : d.parts()) parts.push_back(descriptor_to_json(p));
            j["parts"] = parts;
            break;
        }
        case SetKind::Raster:
            // Bitmasks persist in the KPPG binary container; JSON carries a path.
            throw ConfigError("raster descriptors serialize via KPPG, not inline JSON");
    }
    return j;
}

inline SetDescriptor descriptor_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    int dim = j.at("dim").get<int>();
    if (kind == "empty") return SetDescriptor::empty(dim);
    if (kind == "half-space")
        return SetDescriptor::half_space(vec_from_json(j.at("normal")), j.at("offset").get<double>());
    if (kind == "ball")
        return SetDescriptor::ball(vec_from_json(j.at("center")), j.at("radius").get<double>());
    if (kind == "convex-polytope") {
        std::vector<HalfSpacePlane> faces;
        for (const auto& jf : j.at("faces"))
            faces.push_back({vec_from_json(jf.at("normal")), jf.at("offset").get<double>()});
        return SetDescriptor::polytope(std::move(faces), dim);
    }
    if (kind == "v-shape") return SetDescriptor::v_shape(j.at("beta").get<double>(), dim);
    if (kind == "subgraph") return SetDescriptor::subgraph(gamma_from_json(j.at("gamma")), dim);
    if (kind == "union") {
        std::vector<SetDescriptor> parts;
        for (const auto& jp : j.at("parts")) parts.push_back(descriptor_from_json(jp));
        return SetDescriptor::union_of(std::move(parts));
    }
    throw ConfigError("unknown descriptor kind: " + kind);
}

}  // namespace kpplab
