#include "rtslice/ratio.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rtslice/errors.hpp"

namespace rtslice {

namespace {

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw Error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Ratio Ratio::from_decimal(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty ratio");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t n = 0, d = 0;
        auto ln = std::from_chars(text.data(), text.data() + slash, n);
        auto rd = std::from_chars(text.data() + slash + 1, text.data() + text.size(), d);
        if (ln.ec != std::errc{} || ln.ptr != text.data() + slash || rd.ec != std::errc{} ||
            rd.ptr != text.data() + text.size()) {
            throw std::invalid_argument("malformed fraction: " + std::string(text));
        }
        return Ratio(n, d);
    }
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_digit = false;
    bool seen_dot = false;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("malformed decimal: " + std::string(text));
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') {
            throw std::invalid_argument("malformed decimal: " + std::string(text));
        }
        seen_digit = true;
        num = narrow(static_cast<__int128>(num) * 10 + (c - '0'));
        if (seen_dot) den = narrow(static_cast<__int128>(den) * 10);
    }
    if (!seen_digit) throw std::invalid_argument("malformed decimal: " + std::string(text));
    return Ratio(negative ? -num : num, den);
}

Ratio& Ratio::operator+=(const Ratio& other) {
    const __int128 num =
        static_cast<__int128>(num_) * other.den_ + static_cast<__int128>(other.num_) * den_;
    const __int128 den = static_cast<__int128>(den_) * other.den_;
    // Reduce in 128-bit space first so long sums of small fractions stay representable.
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    const __int128 g = a == 0 ? 1 : a;
    *this = Ratio(narrow(num / g), narrow(den / g));
    return *this;
}

std::strong_ordering Ratio::operator<=>(const Ratio& other) const {
    const __int128 lhs = static_cast<__int128>(num_) * other.den_;
    const __int128 rhs = static_cast<__int128>(other.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Ratio::to_string() const {
    // Denominators of the form 2^a * 5^b print as terminating decimals.
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    const int digits = twos > fives ? twos : fives;
    __int128 scaled = num_ < 0 ? -static_cast<__int128>(num_) : static_cast<__int128>(num_);
    for (int i = 0; i < digits; ++i) scaled *= 10;
    scaled /= den_;
    std::string body;
    if (scaled == 0) body = "0";
    while (scaled > 0) {
        body.insert(body.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
        scaled /= 10;
    }
    while (static_cast<int>(body.size()) <= digits) body.insert(body.begin(), '0');
    std::string out = num_ < 0 ? "-" : "";
    if (digits == 0) return out + body;
    out += body.substr(0, body.size() - digits);
    out += ".";
    out += body.substr(body.size() - digits);
    return out;
}

}  // namespace rtslice
