#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace torheight {

// Exact rational scalar. mpq_class keeps the canonical form
// (positive denominator, coprime numerator/denominator) after
// canonicalize(), which every constructor below guarantees.
using Rat = mpq_class;
using Int = mpz_class;

using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;

inline Rat ratOf(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p/q" or "p" (optional sign, arbitrary precision).
Rat parseRat(const std::string& s);

// Renders "p/q", or just "p" when the denominator is one.
std::string ratToString(const Rat& q);

double ratToDouble(const Rat& q);

// Nearest rational with the given denominator (round half away from zero).
Rat snapToRational(double x, long denominator);

QVec qvec(std::initializer_list<long> entries);
ZVec zvec(std::initializer_list<long> entries);

QVec toQVec(const ZVec& v);

// Entrywise operations; ranks must match.
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const Rat& c, const QVec& v);
Rat dot(const QVec& a, const QVec& b);
Rat dot(const QVec& a, const ZVec& b);
bool isZero(const QVec& v);
bool isZero(const ZVec& v);

// Value group Gamma = val(K^x): either all of Q or gamma*Z.
struct ValueGroup {
    enum class Mode { Divisible, Discrete };
    Mode mode = Mode::Divisible;
    Rat base = 1;  // used in Discrete mode; must be > 0

    static ValueGroup divisible() { return {}; }
    static ValueGroup discrete(const Rat& base);

    bool contains(const Rat& x) const;
};

}  // namespace torheight
