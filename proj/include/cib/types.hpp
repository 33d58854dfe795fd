#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cib {

// Default limit on exhaustive scenario-space walks. Operations refuse
// (CapExceeded) instead of sampling when the space is larger.
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition rejection: bad index, malformed input, unusable argument.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// Scenario space exceeds the enumeration cap.
class CapExceeded : public Error {
public:
    CapExceeded(std::uint64_t space, std::uint64_t cap)
        : Error("scenario space of " + std::to_string(space) +
                " exceeds enumeration cap " + std::to_string(cap)),
          space(space), cap(cap) {}
    std::uint64_t space;
    std::uint64_t cap;
};

// Model file syntax or schema failure. `path` locates the offending field.
class ParseError : public Error {
public:
    ParseError(std::string path_, const std::string& what)
        : Error(path_.empty() ? what : path_ + ": " + what), path(std::move(path_)) {}
    std::string path;
};

// Chain construction failure, names the timespan.
class ChainError : public Error {
public:
    ChainError(std::string timespan_, const std::string& what)
        : Error("timespan '" + timespan_ + "': " + what), timespan(std::move(timespan_)) {}
    std::string timespan;
};

enum class Severity { Warning, Error };

// One validation finding. Violations are data, not exceptions.
struct Violation {
    Severity severity = Severity::Error;
    std::string location;
    std::string message;

    bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

inline bool has_errors(const ValidationReport& report) {
    for (const auto& v : report)
        if (v.severity == Severity::Error) return true;
    return false;
}

// Exact non-negative rational. Weights are basin counts over the scenario
// space size, so numerator and denominator always fit in 64 bits.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational of(std::uint64_t n, std::uint64_t d) {
        if (d == 0) throw InvalidArgument("rational with zero denominator");
        const std::uint64_t g = std::gcd(n, d);
        return Rational{g ? n / g : 0, g ? d / g : 1};
    }

    Rational plus(const Rational& other) const {
        using u128 = unsigned __int128;
        const std::uint64_t g = std::gcd(den, other.den);
        const u128 l = static_cast<u128>(den / g) * other.den;
        const u128 n = static_cast<u128>(num) * (other.den / g) +
                       static_cast<u128>(other.num) * (den / g);
        const u128 gg = gcd128(n, l);
        const u128 rn = gg ? n / gg : 0;
        const u128 rd = gg ? l / gg : 1;
        if (rn > UINT64_MAX || rd > UINT64_MAX)
            throw Error("rational overflow in addition");
        return Rational{static_cast<std::uint64_t>(rn), static_cast<std::uint64_t>(rd)};
    }

    bool operator==(const Rational& other) const {
        return num == other.num && den == other.den;
    }

    bool less_than(const Rational& other) const {
        using u128 = unsigned __int128;
        return static_cast<u128>(num) * other.den < static_cast<u128>(other.num) * den;
    }

    bool is_one() const { return num == den; }
    bool is_zero() const { return num == 0; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string to_string() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }

private:
    static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
        while (b) {
            const unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
};

}  // namespace cib
