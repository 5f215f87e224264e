// torheight: exact convex-geometry computations for toric heights.
//
// Every command reads one JSON input file and writes a CommandResult
// envelope {"command","inputs_digest","payload","exact","elapsed_ms"}
// to stdout or --output. The payload is byte-deterministic for a given
// input and flags; only elapsed_ms varies between runs. emit-roof is the
// exception: it writes raw CSV rows.
//
// Exit codes: 0 success, 1 computation error, 2 malformed input or
// unknown command, 3 failed check.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "torheight/checks.hpp"
#include "torheight/instances.hpp"
#include "torheight/json_io.hpp"

namespace {

using torheight::ConcaveOnPolytope;
using torheight::ConcavePA;
using torheight::Int;
using torheight::Place;
using torheight::Polytope;
using torheight::QVec;
using torheight::Rat;
using torheight::RoofInstance;
using torheight::SupportFunctionData;
using torheight::ValueGroup;
using json = torheight::io::json;

// thrown for schema/flag problems: exit code 2
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1aDigest(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parseJson(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("input is not valid JSON: ") + e.what());
    }
}

ValueGroup parseGamma(const std::string& text) {
    if (text == "divisible") return ValueGroup::divisible();
    const std::string prefix = "discrete:";
    if (text.rfind(prefix, 0) == 0) {
        Rat base;
        try {
            base = torheight::parseRat(text.substr(prefix.size()));
        } catch (const std::exception&) {
            throw InputError("--gamma discrete:P/Q needs a rational base");
        }
        if (base <= 0) throw InputError("--gamma discrete base must be positive");
        return ValueGroup::discrete(base);
    }
    throw InputError("--gamma must be divisible or discrete:P/Q");
}

// exact fixed-point rendering of p/q with 12 digits after the point,
// rounded to nearest (ties away from zero)
std::string decimal12(const Rat& x) {
    Int scale = 1;
    for (int i = 0; i < 12; ++i) scale *= 10;
    Int num = x.get_num() * scale;
    Int den = x.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    Int scaled = (2 * num + den) / (2 * den);
    Int whole = scaled / scale;
    Int frac = scaled % scale;
    std::string fracStr = frac.get_str();
    fracStr.insert(0, 12 - fracStr.size(), '0');
    std::string out = (neg && scaled != 0 ? "-" : "") + whole.get_str() + "." + fracStr;
    return out;
}

Int ratFloor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Int ratCeil(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

// schema errors raised while decoding inputs map to exit code 2;
// errors raised later, during computation, map to exit code 1
template <typename F>
auto parsed(F&& f) {
    try {
        return f();
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

ConcavePA concaveField(const json& j, const std::string& key) {
    if (!j.contains(key)) throw InputError("input needs a \"" + key + "\" object");
    return parsed([&] { return torheight::io::concaveFromJson(j.at(key)); });
}

// ----- command payloads -------------------------------------------------

json cmdHull(const json& in) {
    std::vector<QVec> pts;
    const char* key = in.contains("points") ? "points" : "vertices";
    if (!in.contains(key)) throw InputError("hull input needs a \"points\" array");
    parsed([&] {
        for (const auto& row : in.at(key)) pts.push_back(torheight::io::ratsFromJson(row));
        return 0;
    });
    if (pts.empty()) throw InputError("hull input needs at least one point");
    return torheight::io::toJson(torheight::convexHull(pts));
}

json cmdVolume(const json& in) {
    Polytope p = parsed([&] { return torheight::io::polytopeFromJson(in); });
    json payload;
    payload["value"] = torheight::ratToString(volume(p, torheight::VolumeMode::Ambient));
    payload["dim"] = p.dim;
    return payload;
}

json cmdDual(const json& in) {
    if (in.contains("pieces")) {
        ConcavePA f = parsed([&] { return torheight::io::concaveFromJson(in); });
        return torheight::io::toJson(legendreDual(f));
    }
    if (in.contains("lift")) {
        ConcaveOnPolytope g = parsed([&] { return torheight::io::envelopeFromJson(in); });
        return torheight::io::toJson(legendreDualBack(g));
    }
    throw InputError("dual input needs \"pieces\" or \"lift\"");
}

json cmdMa(const json& in) {
    ConcavePA f = parsed([&] { return torheight::io::concaveFromJson(in); });
    return torheight::io::toJson(maMeasure(f));
}

json cmdDegree(const json& in) {
    ConcavePA psi = concaveField(in, "Psi");
    SupportFunctionData sf = supportFunctionFromMinForm(psi);
    json payload;
    payload["value"] = torheight::ratToString(degree(sf));
    return payload;
}

json cmdLocalHeight(const json& in, const ValueGroup& gamma) {
    SupportFunctionData bigPsi = supportFunctionFromMinForm(concaveField(in, "Psi"));
    ConcavePA psi = concaveField(in, "psi");
    torheight::LocalHeight h = toricLocalHeight(bigPsi, psi, gamma);
    json payload;
    payload["value"] = torheight::ratToString(h.value);
    payload["exact"] = true;
    return payload;
}

json cmdPushforward(const json& in) {
    ConcavePA psi = in.contains("psi") ? concaveField(in, "psi")
                                       : parsed([&] { return torheight::io::concaveFromJson(in); });
    return torheight::io::toJson(tropPushforwardMeasure(psi));
}

json cmdGlobalHeight(const json& in, double tol) {
    RoofInstance inst = parsed([&] { return torheight::io::instanceFromJson(in); });
    return torheight::io::toJson(globalHeight(inst, tol));
}

json cmdCheck(uint64_t seed, bool& failed) {
    auto outcomes = torheight::runCheckSuite(seed);
    json payload;
    payload["seed"] = seed;
    json props = json::array();
    for (const auto& o : outcomes) {
        json e;
        e["name"] = o.name;
        e["passed"] = o.passed;
        e["detail"] = o.detail;
        props.push_back(e);
    }
    payload["properties"] = props;
    payload["all_passed"] = torheight::allPassed(outcomes);
    failed = !torheight::allPassed(outcomes);
    return payload;
}

std::string cmdEmitRoof(const json& in, const std::string& placeId, long resolution) {
    RoofInstance inst = parsed([&] { return torheight::io::instanceFromJson(in); });
    if (resolution < 1) throw InputError("--resolution must be a positive integer");
    const Place* place = nullptr;
    for (const auto& p : inst.places)
        if (p.id == placeId) place = &p;
    if (!place) throw InputError("unknown place id: " + placeId);
    if (place->kind != Place::Kind::Finite && place->kind != Place::Kind::PointValue)
        throw std::runtime_error("emit-roof needs a finite or point place");
    auto [roof, integral] = roofFromLift(inst, *place);
    (void)integral;
    Polytope delta = inst.polytope();

    // enumerate delta intersect (1/resolution) Z^n via the bounding box
    size_t n = inst.dimension;
    std::vector<Int> lo(n), hi(n);
    Rat res = Rat(static_cast<long>(resolution));
    for (size_t i = 0; i < n; ++i) {
        bool first = true;
        for (const auto& v : delta.vertices) {
            Rat s = v[i] * res;
            Int fl = ratFloor(s);
            Int ce = ratCeil(s);
            if (first || fl < lo[i]) lo[i] = fl;
            if (first || ce > hi[i]) hi[i] = ce;
            first = false;
        }
    }
    std::ostringstream out;
    std::vector<Int> idx(lo);
    while (true) {
        QVec pt(n);
        for (size_t i = 0; i < n; ++i) pt[i] = Rat(idx[i]) / res;
        if (delta.contains(pt)) {
            for (size_t i = 0; i < n; ++i) out << decimal12(pt[i]) << ",";
            out << decimal12(roof.evaluate(pt)) << "\n";
        }
        size_t i = 0;
        for (; i < n; ++i) {
            if (idx[i] < hi[i]) {
                ++idx[i];
                for (size_t k = 0; k < i; ++k) idx[k] = lo[k];
                break;
            }
        }
        if (i == n) break;
    }
    return out.str();
}

void writeOut(const std::string& text, const std::string& outputPath) {
    if (outputPath.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(outputPath, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + outputPath);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact convex-geometry engine for toric heights"};
    app.require_subcommand(1);

    std::string inputPath, outputPath, format = "json", gammaSpec = "divisible";
    std::string placeId;
    double tol = 1e-9;
    uint64_t seed = 0;
    long resolution = 1;

    auto addCommon = [&](CLI::App* sub, bool needsInput) {
        auto* opt = sub->add_option("--input", inputPath, "JSON input file");
        if (needsInput) opt->required();
        sub->add_option("--output", outputPath, "output file (default stdout)");
        sub->add_option("--format", format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--tol", tol, "float tolerance");
        sub->add_option("--gamma", gammaSpec, "divisible|discrete:P/Q");
        sub->add_option("--seed", seed, "seed for check");
        return sub;
    };

    std::vector<std::string> plain = {"hull",   "volume",      "dual",          "ma",
                                      "degree", "local-height", "pushforward", "global-height"};
    for (const auto& name : plain) addCommon(app.add_subcommand(name), true);
    addCommon(app.add_subcommand("check"), false);
    auto* roofCmd = addCommon(app.add_subcommand("emit-roof"), true);
    roofCmd->add_option("--place", placeId, "place id")->required();
    roofCmd->add_option("--resolution", resolution, "grid refinements per lattice step")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    auto started = std::chrono::steady_clock::now();

    try {
        std::string inputText;
        if (!inputPath.empty()) inputText = readFile(inputPath);

        if (command == "emit-roof") {
            writeOut(cmdEmitRoof(parseJson(inputText), placeId, resolution), outputPath);
            return 0;
        }
        if (format == "csv") throw InputError("csv format is only available for emit-roof");

        json payload;
        bool exact = true;
        bool checkFailed = false;
        if (command == "hull") payload = cmdHull(parseJson(inputText));
        else if (command == "volume") payload = cmdVolume(parseJson(inputText));
        else if (command == "dual") payload = cmdDual(parseJson(inputText));
        else if (command == "ma") payload = cmdMa(parseJson(inputText));
        else if (command == "degree") payload = cmdDegree(parseJson(inputText));
        else if (command == "local-height")
            payload = cmdLocalHeight(parseJson(inputText), parseGamma(gammaSpec));
        else if (command == "pushforward") payload = cmdPushforward(parseJson(inputText));
        else if (command == "global-height") {
            payload = cmdGlobalHeight(parseJson(inputText), tol);
            exact = payload.at("exact").get<bool>();
        } else if (command == "check") {
            payload = cmdCheck(seed, checkFailed);
        }

        double elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
        json envelope;
        envelope["command"] = command;
        envelope["inputs_digest"] = fnv1aDigest(inputText);
        envelope["payload"] = payload;
        envelope["exact"] = exact;
        envelope["elapsed_ms"] = elapsed;
        writeOut(envelope.dump(2) + "\n", outputPath);
        return checkFailed ? 3 : 0;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 1;
    }
}
