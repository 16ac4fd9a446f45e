#include "ilab/rational.h"

#include <cctype>

namespace ilab {

std::string to_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s)
{
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Integer parse_integer(std::string_view s)
{
    std::string body(s[0] == '+' ? s.substr(1) : s);
    return Integer(body, 10);
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
    if (!is_integer_literal(num))
        throw ParseError("malformed rational: '" + std::string(text) + "'");
    Integer n = parse_integer(num);
    Integer d = 1;
    if (slash != std::string_view::npos) {
        if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+')
            throw ParseError("malformed rational: '" + std::string(text) + "'");
        d = parse_integer(den);
        if (d == 0) throw ParseError("zero denominator in rational: '" + std::string(text) + "'");
    }
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational ratio(long num, long den)
{
    if (den == 0) throw Error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace ilab
