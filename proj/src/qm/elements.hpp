#pragma once

#include <cmath>
#include <vector>

namespace colhel::qm {

// Logarithms of the elementary 1-D integrals between g_n(r) = (a r)^n e^{-a r}
// with the powers of a factored out. All are Gamma-function reductions of
// int_0^inf r^k e^{-2 a r} dr = k! / (2a)^{k+1}.
class LogIntegrals {
public:
    explicit LogIntegrals(int max_power);

    // int g_i g_j dr = exp(lo(i,j)) / a
    double lo(int i, int j) const { return lnfact_[i + j] - ln2_ * (i + j + 1); }
    // int g_i g_j / r dr = exp(lo1(i,j)); requires i + j >= 1
    double lo1(int i, int j) const { return lnfact_[i + j - 1] - ln2_ * (i + j); }
    // int int r1^.. r2^.. /(r1+r2): Beta-function reduction,
    // int g_i(r1) g_j(r2) / (r1 + r2) = exp(ljj(i,j)) / a
    double ljj(int i, int j) const {
        return lnfact_[i] + lnfact_[j] - std::log(static_cast<double>(i + j + 1)) - ln2_ * (i + j + 1);
    }

    double lnfact(int k) const { return lnfact_[k]; }

private:
    std::vector<double> lnfact_;
    static constexpr double ln2_ = 0.69314718055994530941723212146;
};

// Signed-term accumulator: every normalized element is a short sum of
// coef * exp(logmag + offset) with moderate exponents once the norm offset is
// subtracted.
struct TermSum {
    double offset = 0;
    double value = 0;
    void add(double coef, double logmag) { value += coef * std::exp(logmag + offset); }
};

// ln(x + s*y) given lx = ln x, ly = ln y <= lx, s = +-1.
double log_add_signed(double lx, double ly, double s);

} // namespace colhel::qm
