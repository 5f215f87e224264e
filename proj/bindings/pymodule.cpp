// Python bindings: thin JSON-string entry points over the C++ engine.
// Every function takes and returns JSON text with the same payload
// schemas as the torheight CLI; the Python package wraps these with
// dict-based conveniences.

#include <pybind11/pybind11.h>

#include "torheight/checks.hpp"
#include "torheight/json_io.hpp"

namespace py = pybind11;
using namespace torheight;
using json = io::json;

namespace {

json parse(const std::string& text) { return json::parse(text); }

ValueGroup gammaFromString(const std::string& text) {
    if (text == "divisible") return ValueGroup::divisible();
    const std::string prefix = "discrete:";
    if (text.rfind(prefix, 0) == 0) return ValueGroup::discrete(parseRat(text.substr(prefix.size())));
    throw std::invalid_argument("gamma must be divisible or discrete:P/Q");
}

std::string hullJson(const std::string& text) {
    json in = parse(text);
    std::vector<QVec> pts;
    const char* key = in.contains("points") ? "points" : "vertices";
    for (const auto& row : in.at(key)) pts.push_back(io::ratsFromJson(row));
    return io::toJson(convexHull(pts)).dump();
}

std::string volumeJson(const std::string& text) {
    json out;
    out["value"] = ratToString(volume(io::polytopeFromJson(parse(text)), VolumeMode::Ambient));
    return out.dump();
}

std::string dualJson(const std::string& text) {
    json in = parse(text);
    if (in.contains("pieces")) return io::toJson(legendreDual(io::concaveFromJson(in))).dump();
    return io::toJson(legendreDualBack(io::envelopeFromJson(in))).dump();
}

std::string maJson(const std::string& text) {
    return io::toJson(maMeasure(io::concaveFromJson(parse(text)))).dump();
}

std::string degreeJson(const std::string& text) {
    json in = parse(text);
    SupportFunctionData sf = supportFunctionFromMinForm(io::concaveFromJson(in.at("Psi")));
    json out;
    out["value"] = ratToString(degree(sf));
    return out.dump();
}

std::string localHeightJson(const std::string& text, const std::string& gamma) {
    json in = parse(text);
    SupportFunctionData bigPsi = supportFunctionFromMinForm(io::concaveFromJson(in.at("Psi")));
    ConcavePA psi = io::concaveFromJson(in.at("psi"));
    json out;
    out["value"] = ratToString(toricLocalHeight(bigPsi, psi, gammaFromString(gamma)).value);
    out["exact"] = true;
    return out.dump();
}

std::string pushforwardJson(const std::string& text) {
    json in = parse(text);
    const json& src = in.contains("psi") ? in.at("psi") : in;
    return io::toJson(tropPushforwardMeasure(io::concaveFromJson(src))).dump();
}

std::string globalHeightJson(const std::string& text, double tol) {
    return io::toJson(globalHeight(io::instanceFromJson(parse(text)), tol)).dump();
}

std::string checkJson(uint64_t seed) {
    auto outcomes = runCheckSuite(seed);
    json out;
    json props = json::array();
    for (const auto& o : outcomes) {
        json e;
        e["name"] = o.name;
        e["passed"] = o.passed;
        e["detail"] = o.detail;
        props.push_back(e);
    }
    out["properties"] = props;
    out["all_passed"] = allPassed(outcomes);
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact convex-geometry engine for toric heights (JSON-string API)";
    m.def("hull_json", &hullJson, py::arg("text"));
    m.def("volume_json", &volumeJson, py::arg("text"));
    m.def("dual_json", &dualJson, py::arg("text"));
    m.def("ma_json", &maJson, py::arg("text"));
    m.def("degree_json", &degreeJson, py::arg("text"));
    m.def("local_height_json", &localHeightJson, py::arg("text"), py::arg("gamma") = "divisible");
    m.def("pushforward_json", &pushforwardJson, py::arg("text"));
    m.def("global_height_json", &globalHeightJson, py::arg("text"), py::arg("tol") = 1e-9,
          py::call_guard<py::gil_scoped_release>());
    m.def("check_json", &checkJson, py::arg("seed") = 0,
          py::call_guard<py::gil_scoped_release>());
}
