#include "evosi/airy.hpp"

#include <cmath>
#include <numbers>

#include "evosi/errors.hpp"

namespace evosi {

namespace {

constexpr long double ai0 = 0.355028053887817239260063186004183176L;
constexpr long double aip0 = -0.258819403792806798405183560189203963L;
constexpr double series_low = -8.0;
constexpr double series_high = 2.0;

// Maclaurin series in extended precision; cancellation stays below 1e-12 absolute on [-8, 2]
void airy_series(double xd, double& ai, double& aip) {
    const long double x = xd, x3 = x * x * x;
    long double f = 0, g = 0, fp = 0, gp = 0;
    long double tf = 1, tg = x, tfp = x * x / 2, tgp = 1;
    long double scale = 1;
    for (int k = 0; k < 400; ++k) {
        f += tf;
        g += tg;
        gp += tgp;
        if (k >= 1) fp += tfp;
        const long double kk = k + 1;
        tf *= x3 / ((3 * kk - 1) * (3 * kk));
        tg *= x3 / ((3 * kk) * (3 * kk + 1));
        tgp *= x3 / ((3 * kk) * (3 * kk - 2));
        if (k >= 1) tfp *= x3 / ((3 * kk - 3) * (3 * kk - 1));
        scale = std::fmax(scale, std::fabs(tf) + std::fabs(tg));
        if (k > 4 && std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp) < 1e-22L * scale)
            break;
    }
    ai = static_cast<double>(ai0 * f + aip0 * g);
    aip = static_cast<double>(ai0 * fp + aip0 * gp);
}

// K_nu(z) e^{z} by the trapezoidal rule on the cosh integral (even, entire integrand)
double bessel_k_scaled(double nu, double z) {
    const double h = std::fmin(0.05, 0.25 / std::sqrt(z));
    double s = 0.5;
    for (int i = 1;; ++i) {
        const double t = i * h;
        const double e = std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
        s += e;
        if (e < 1e-19 * s) break;
    }
    return s * h;
}

void airy_positive(double x, double& ai, double& aip) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double damp = std::exp(-zeta);
    ai = std::numbers::inv_pi * std::sqrt(x / 3.0) * bessel_k_scaled(1.0 / 3.0, zeta) * damp;
    aip = -x / (std::numbers::pi * std::sqrt(3.0)) * bessel_k_scaled(2.0 / 3.0, zeta) * damp;
}

// oscillatory asymptotic expansion, truncated at its smallest term
void airy_negative(double x, double& ai, double& aip) {
    const double w = -x;
    const double zeta = 2.0 / 3.0 * w * std::sqrt(w);
    double P = 0, Q = 0, R = 0, S = 0;
    double u = 1.0, zp = 1.0, last = INFINITY;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
        const double v = k == 0 ? 1.0 : -(6.0 * k + 1) / (6.0 * k - 1) * u;
        const double term = u * zp;
        if (std::fabs(term) > last) break;
        last = std::fabs(term);
        const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            P += sgn * term;
            R += sgn * v * zp;
        } else {
            Q += sgn * term;
            S += sgn * v * zp;
        }
        zp /= zeta;
        if (last < 1e-17) break;
    }
    const double ph = zeta - std::numbers::pi / 4;
    const double c = std::cos(ph), s = std::sin(ph);
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    const double w4 = std::sqrt(std::sqrt(w));
    ai = norm / w4 * (c * P + s * Q);
    aip = norm * w4 * (s * R - c * S);
}

} // namespace

void airy_pair(double x, double& ai, double& aip) {
    if (!(x >= -1e4 && x <= 100.0)) throw out_of_range_error("airy argument outside [-1e4, 100]");
    if (x > series_high)
        airy_positive(x, ai, aip);
    else if (x >= series_low)
        airy_series(x, ai, aip);
    else
        airy_negative(x, ai, aip);
}

double airy_ai(double x) {
    double a, b;
    airy_pair(x, a, b);
    return a;
}

double airy_ai_prime(double x) {
    double a, b;
    airy_pair(x, a, b);
    return b;
}

std::vector<double> airy_zeros(int count) {
    if (count < 0 || count > 2000) throw std::invalid_argument("zero count must be in 0..2000");
    std::vector<double> z;
    z.reserve(count);
    for (int k = 1; k <= count; ++k) {
        const double t = 3.0 * std::numbers::pi * (4.0 * k - 1) / 8.0;
        const double t2 = 1.0 / (t * t);
        double x = -std::pow(t, 2.0 / 3.0) * (1 + t2 * (5.0 / 48 - t2 * (5.0 / 36)));
        bool done = false;
        for (int it = 0; it < 60; ++it) {
            double a, b;
            airy_pair(x, a, b);
            const double step = a / b;
            x -= step;
            if (std::fabs(step) <= 1e-15 * std::fabs(x)) {
                done = true;
                break;
            }
        }
        if (!done || std::fabs(airy_ai(x)) > 1e-12)
            throw convergence_failure("Newton iteration for an Airy zero did not converge");
        z.push_back(x);
    }
    return z;
}

std::vector<double> airy_taylor(double x0, int order) {
    std::vector<double> c(order + 1, 0.0);
    double a, b;
    airy_pair(x0, a, b);
    c[0] = a;
    if (order >= 1) c[1] = b;
    // Ai'' = x Ai gives (n+2)(n+1) c_{n+2} = x0 c_n + c_{n-1}
    for (int n = 0; n + 2 <= order; ++n)
        c[n + 2] = (x0 * c[n] + (n >= 1 ? c[n - 1] : 0.0)) / ((n + 2.0) * (n + 1.0));
    return c;
}

} // namespace evosi
