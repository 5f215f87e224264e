#include "torheight/rational.hpp"

#include <cmath>

namespace torheight {

Rat parseRat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string ratToString(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double ratToDouble(const Rat& q) { return q.get_d(); }

Rat snapToRational(double x, long denominator) {
    if (denominator <= 0) throw std::invalid_argument("snap denominator must be positive");
    if (!std::isfinite(x)) throw std::invalid_argument("cannot snap non-finite value");
    double scaled = x * static_cast<double>(denominator);
    double rounded = std::round(scaled);
    Rat q(Int(static_cast<long>(rounded)), Int(denominator));
    q.canonicalize();
    return q;
}

QVec qvec(std::initializer_list<long> entries) {
    QVec v;
    for (long e : entries) v.emplace_back(e);
    return v;
}

ZVec zvec(std::initializer_list<long> entries) {
    ZVec v;
    for (long e : entries) v.emplace_back(e);
    return v;
}

QVec toQVec(const ZVec& v) {
    QVec out;
    out.reserve(v.size());
    for (const auto& e : v) out.emplace_back(e);
    return out;
}

static void checkRank(size_t a, size_t b) {
    if (a != b) throw std::invalid_argument("ambient rank mismatch");
}

QVec add(const QVec& a, const QVec& b) {
    checkRank(a.size(), b.size());
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

QVec sub(const QVec& a, const QVec& b) {
    checkRank(a.size(), b.size());
    QVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

QVec scale(const Rat& c, const QVec& v) {
    QVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

Rat dot(const QVec& a, const QVec& b) {
    checkRank(a.size(), b.size());
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rat dot(const QVec& a, const ZVec& b) {
    checkRank(a.size(), b.size());
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool isZero(const QVec& v) {
    for (const auto& e : v)
        if (e != 0) return false;
    return true;
}

bool isZero(const ZVec& v) {
    for (const auto& e : v)
        if (e != 0) return false;
    return true;
}

ValueGroup ValueGroup::discrete(const Rat& base) {
    if (base <= 0) throw std::invalid_argument("discrete value group base must be positive");
    ValueGroup g;
    g.mode = Mode::Discrete;
    g.base = base;
    return g;
}

bool ValueGroup::contains(const Rat& x) const {
    if (mode == Mode::Divisible) return true;
    Rat r = x / base;
    return r.get_den() == 1;
}

}  // namespace torheight
