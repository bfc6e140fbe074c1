#include "nestlab/real.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace nestlab {

std::string Real::str() const {
    // digits10 ~ bits * log10(2), plus slack so parsing reproduces the value
    int digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30103)) + 3;
    return str(digits);
}

std::string Real::str(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    bool neg = !mant.empty() && mant[0] == '-';
    std::string body = neg ? mant.substr(1) : mant;
    while (body.size() > 1 && body.back() == '0') body.pop_back();
    // e is the decimal exponent such that value = 0.body * 10^e
    std::string out;
    if (e > 0 && e <= static_cast<mpfr_exp_t>(body.size())) {
        out = body.substr(0, static_cast<size_t>(e));
        if (static_cast<size_t>(e) < body.size()) out += "." + body.substr(static_cast<size_t>(e));
    } else if (e <= 0 && e > -6) {
        out = "0." + std::string(static_cast<size_t>(-e), '0') + body;
    } else {
        out = body.substr(0, 1);
        if (body.size() > 1) out += "." + body.substr(1);
        out += "e" + std::to_string(static_cast<long>(e - 1));
    }
    return neg ? "-" + out : out;
}

} // namespace nestlab
