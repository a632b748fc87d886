#include "ellzeros/interval.hpp"

#include <cmath>
#include <stdexcept>

namespace ellzeros {

ExtendedInterval::ExtendedInterval(double a, double b) : a_(a), b_(b)
{
    if (std::isnan(a) || std::isnan(b))
        throw std::invalid_argument("interval endpoint is NaN");
    if (!(a < b))
        throw std::invalid_argument("interval requires a < b");
}

bool ExtendedInterval::is_finite() const noexcept
{
    return std::isfinite(a_) && std::isfinite(b_);
}

std::string to_string(SignCase c)
{
    switch (c) {
    case SignCase::positive: return "positive";
    case SignCase::zero: return "zero";
    case SignCase::negative: return "negative";
    }
    return "unknown";
}

AlphaParam alpha_of(const ExtendedInterval& interval, int n)
{
    if (n < 1) throw std::invalid_argument("degree n must be positive");
    const double a = interval.a();
    const double b = interval.b();

    AlphaParam p;
    if (interval.is_real_line()) {
        p.alpha = 0.0;
        p.alpha_n = 0.0;
        p.sign_case = SignCase::zero;
        return p;
    }

    if (b == kInf) {
        p.alpha = (a == 0.0) ? kInf : 1.0 / a;
    } else if (a == -kInf) {
        p.alpha = (b == 0.0) ? kInf : -1.0 / b;
    } else {
        const double denom = 1.0 + a * b;
        p.alpha = (denom == 0.0) ? kInf : (b - a) / denom;
    }
    p.alpha_n = std::sqrt(static_cast<double>(n)) * p.alpha;
    p.sign_case = p.alpha > 0.0 ? SignCase::positive : SignCase::negative;
    return p;
}

double parse_extended(const std::string& text)
{
    if (text == "inf" || text == "+inf" || text == "Inf" || text == "+Inf") return kInf;
    if (text == "-inf" || text == "-Inf") return -kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (used != text.size() || std::isnan(v))
        throw std::invalid_argument("not a number: '" + text + "'");
    return v;
}

}  // namespace ellzeros
