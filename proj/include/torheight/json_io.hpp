#pragma once

#include <json.hpp>

#include "torheight/heights.hpp"

namespace torheight::io {

// ordered_json keeps insertion order: payloads are emitted with a fixed,
// canonical key order so identical inputs give byte-identical output.
using json = nlohmann::ordered_json;

// 17 significant digits: round-trippable doubles, stable formatting
std::string formatDouble(double x);

json ratsToJson(const QVec& v);
QVec ratsFromJson(const json& a);

json toJson(const Polytope& p);           // {"vertices": ..., "halfspaces": ..., "dim": ...}
Polytope polytopeFromJson(const json& j); // accepts {"vertices"} or {"halfspaces"} (+"rank")

json toJson(const ConcavePA& f);          // {"pieces": [{"slope","constant"}]}
ConcavePA concaveFromJson(const json& j);

json toJson(const ConcaveOnPolytope& g);  // {"lift": [{"point","value"}]}
ConcaveOnPolytope envelopeFromJson(const json& j);

json toJson(const DiscreteMeasure& mu);   // {"atoms": [{"at","mass"}]}
DiscreteMeasure measureFromJson(const json& j);

RoofInstance instanceFromJson(const json& j);

json toJson(const HeightReport& rep);

}  // namespace torheight::io
