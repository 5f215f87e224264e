#include "torheight/json_io.hpp"

#include <cstdio>

namespace torheight::io {

std::string formatDouble(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

static Rat ratFromJson(const json& j) {
    if (j.is_string()) return parseRat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    throw std::invalid_argument("expected a rational \"p/q\" string");
}

json ratsToJson(const QVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(ratToString(x));
    return a;
}

QVec ratsFromJson(const json& a) {
    if (!a.is_array()) throw std::invalid_argument("expected an array of rationals");
    QVec v;
    for (const auto& e : a) v.push_back(ratFromJson(e));
    return v;
}

json toJson(const Polytope& p) {
    json j;
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(ratsToJson(v));
    j["vertices"] = verts;
    json hs = json::array();
    for (const auto& h : p.halfspaces) {
        json e;
        e["normal"] = ratsToJson(h.normal);
        e["offset"] = ratToString(h.offset);
        hs.push_back(e);
    }
    j["halfspaces"] = hs;
    json eqs = json::array();
    for (const auto& e : p.equations) {
        json o;
        o["normal"] = ratsToJson(e.normal);
        o["offset"] = ratToString(e.offset);
        eqs.push_back(o);
    }
    j["equations"] = eqs;
    j["dim"] = p.dim;
    return j;
}

Polytope polytopeFromJson(const json& j) {
    if (j.contains("vertices") && !j["vertices"].empty()) {
        std::vector<QVec> pts;
        for (const auto& v : j["vertices"]) pts.push_back(ratsFromJson(v));
        return convexHull(pts);
    }
    if (j.contains("halfspaces")) {
        std::vector<Halfspace> hs;
        for (const auto& h : j["halfspaces"])
            hs.push_back({ratsFromJson(h.at("normal")), ratFromJson(h.at("offset"))});
        if (hs.empty()) throw std::invalid_argument("empty halfspace list needs a rank");
        return Polyhedron::fromHalfspaces(hs, hs[0].normal.size());
    }
    throw std::invalid_argument("polytope needs \"vertices\" or \"halfspaces\"");
}

json toJson(const ConcavePA& f) {
    json j;
    json pieces = json::array();
    for (const auto& p : f.pieces) {
        json e;
        e["slope"] = ratsToJson(p.slope);
        e["constant"] = ratToString(p.constant);
        pieces.push_back(e);
    }
    j["pieces"] = pieces;
    return j;
}

ConcavePA concaveFromJson(const json& j) {
    if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
        throw std::invalid_argument("concave function needs a nonempty \"pieces\" array");
    std::vector<AffineForm> pieces;
    for (const auto& p : j["pieces"])
        pieces.push_back({ratsFromJson(p.at("slope")), ratFromJson(p.at("constant"))});
    return canonicalMinForm(pieces, pieces[0].slope.size());
}

json toJson(const ConcaveOnPolytope& g) {
    json j;
    json lift = json::array();
    for (size_t i = 0; i < g.lift.size(); ++i) {
        json e;
        e["point"] = ratsToJson(g.lift[i].first);
        e["value"] = ratToString(g.lift[i].second);
        e["active"] = static_cast<bool>(g.liftActive[i]);
        lift.push_back(e);
    }
    j["lift"] = lift;
    return j;
}

ConcaveOnPolytope envelopeFromJson(const json& j) {
    if (!j.contains("lift") || !j["lift"].is_array() || j["lift"].empty())
        throw std::invalid_argument("envelope needs a nonempty \"lift\" array");
    std::vector<std::pair<QVec, Rat>> lifted;
    for (const auto& e : j["lift"])
        lifted.emplace_back(ratsFromJson(e.at("point")), ratFromJson(e.at("value")));
    return upperEnvelope(lifted);
}

json toJson(const DiscreteMeasure& mu) {
    json j;
    json atoms = json::array();
    for (const auto& a : mu.atoms) {
        json e;
        e["at"] = ratsToJson(a.point);
        e["mass"] = ratToString(a.mass);
        atoms.push_back(e);
    }
    j["atoms"] = atoms;
    return j;
}

DiscreteMeasure measureFromJson(const json& j) {
    DiscreteMeasure mu;
    for (const auto& e : j.at("atoms"))
        mu.atoms.push_back({ratsFromJson(e.at("at")), ratFromJson(e.at("mass"))});
    return mu;
}

RoofInstance instanceFromJson(const json& j) {
    RoofInstance inst;
    inst.dimension = j.at("dimension").get<size_t>();
    for (const auto& row : j.at("exponents")) {
        ZVec m;
        for (const auto& e : row) m.emplace_back(static_cast<long>(e.get<long long>()));
        inst.exponents.push_back(m);
    }
    for (const auto& pj : j.at("places")) {
        Place p;
        std::string kind = pj.at("kind").get<std::string>();
        p.id = pj.at("id").get<std::string>();
        p.weight = ratFromJson(pj.at("weight"));
        if (kind == "finite") {
            p.kind = Place::Kind::Finite;
            p.height = ratFromJson(pj.at("height"));
            for (const auto& o : pj.at("orders"))
                p.orders.push_back(static_cast<long>(o.get<long long>()));
        } else if (kind == "point") {
            p.kind = Place::Kind::PointValue;
            p.lambdas = ratsFromJson(pj.at("lambdas"));
        } else if (kind == "circle") {
            p.kind = Place::Kind::Circle;
            p.length = ratFromJson(pj.at("length"));
            for (const auto& profile : pj.at("lambdas")) {
                std::vector<std::pair<Rat, Rat>> bps;
                for (const auto& bp : profile) {
                    if (!bp.is_array() || bp.size() != 2)
                        throw std::invalid_argument("circle breakpoint must be a [u, value] pair");
                    bps.emplace_back(ratFromJson(bp[0]), ratFromJson(bp[1]));
                }
                p.lambdaFunctions.push_back(bps);
            }
        } else if (kind == "sampled") {
            p.kind = Place::Kind::Sampled;
            for (const auto& nj : pj.at("nodes")) {
                Place::Node node;
                node.subweight = nj.at("subweight").get<double>();
                for (const auto& l : nj.at("lambdas")) node.lambdas.push_back(l.get<double>());
                p.nodes.push_back(node);
            }
        } else {
            throw std::invalid_argument("unknown place kind: " + kind);
        }
        inst.places.push_back(std::move(p));
    }
    inst.validate();
    return inst;
}

json toJson(const HeightReport& rep) {
    json j;
    j["polytope"] = toJson(rep.polytope);
    json per = json::array();
    for (const auto& e : rep.perPlace) {
        json o;
        o["id"] = e.id;
        if (e.exact) o["integral"] = ratToString(e.exactValue);
        else o["integral"] = formatDouble(e.value);
        o["exact"] = e.exact;
        per.push_back(o);
    }
    j["per_place"] = per;
    j["factor"] = ratToString(rep.factor);
    if (rep.exactTotal) j["total"] = ratToString(*rep.exactTotal);
    else j["total"] = formatDouble(rep.total);
    j["total_float"] = formatDouble(rep.total);
    j["exact"] = rep.exactTotal.has_value();
    return j;
}

}  // namespace torheight::io
