#include "msslab/specfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "msslab/error.hpp"
#include "msslab/quadrature.hpp"
#include "msslab/summation.hpp"

namespace msslab {

namespace gauss_legendre {

const Rule& rule20() {
    static const Rule rule = [] {
        Rule r{};
        constexpr int N = 20;
        for (int i = 0; i < N; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= N; ++k) {
                    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

}  // namespace gauss_legendre

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2j} / (2j (2j - 1)) for j = 1..12
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
};

cplx stirling(cplx w) {
    cplx inv = 1.0 / w;
    cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx power = inv;
    for (double c : kStirling) {
        series += c * power;
        power *= inv2;
    }
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
}

cplx log_gamma_upper(cplx z) {
    constexpr double kShiftTo = 15.0;
    cplx shift_sum = 0.0;
    while (std::abs(z) < kShiftTo || z.real() < 0.0) {
        shift_sum += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift_sum;
}

}  // namespace

cplx log_gamma(cplx z) {
    if (z.real() <= 0.5 && std::abs(z.imag()) < 1e-10) {
        double nearest = std::round(z.real());
        if (nearest <= 0.0 && std::abs(z - nearest) < 1e-10) {
            throw Error(Errc::PoleProximity, "log_gamma too close to a pole");
        }
    }
    if (z.imag() < 0.0) return std::conj(log_gamma_upper(std::conj(z)));
    return log_gamma_upper(z);
}

double bessel_j(double order, double x) {
    if (!(x > 0.0)) throw Error(Errc::InvalidArgument, "bessel_j needs x > 0");
    if (order < 0.0 && order == std::round(order)) {
        double v = bessel_j(-order, x);
        return (static_cast<long>(-order) % 2 == 0) ? v : -v;
    }
    if (x <= 20.0) {
        long double half = x / 2.0L;
        long double q = -half * half;
        long double term = std::pow(half, static_cast<long double>(order)) / std::tgamma(static_cast<long double>(order) + 1.0L);
        long double sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= q / (k * (k + static_cast<long double>(order)));
            sum += term;
            if (std::abs(term) < 1e-22L * std::abs(sum) && k > x) break;
        }
        return static_cast<double>(sum);
    }
    // Hankel: J = sqrt(2/(pi x)) (P cos chi - Q sin chi)
    const double mu = 4.0 * order * order;
    double p = 0.0, q = 0.0;
    double a = 1.0;  // a_k(order) / x^k
    double last = HUGE_VAL;
    for (int k = 0; k < 200; ++k) {
        if (std::abs(a) > last) break;  // asymptotic series: stop at the smallest term
        last = std::abs(a);
        switch (k % 4) {
            case 0: p += a; break;
            case 1: q += a; break;
            case 2: p -= a; break;
            case 3: q -= a; break;
        }
        if (a == 0.0 || std::abs(a) < 1e-18) break;
        double odd = 2.0 * k + 1.0;
        a *= (mu - odd * odd) / ((k + 1.0) * 8.0 * x);
    }
    double chi = x - (order / 2.0 + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

namespace {

struct Panel {
    double a;
    double b;
};

std::vector<Panel> omega_panels(const OmegaParams& p) {
    // Panels on [0, Y], mirrored onto [-Y, 0].
    std::vector<Panel> right;
    const double log_y = std::log(p.y);
    double t = 0.0;
    while (t < p.Y) {
        double far = t + 1.0;
        double phase_rate = std::abs(log_y - p.n * std::log(std::max(p.n * far / 2.0, 1.0))) + 1.0;
        double width = std::min(1.0, 2.0 * kPi / phase_rate);
        double next = std::min(p.Y, t + width);
        if (p.Y - next < 1e-3 * width) next = p.Y;
        right.push_back({t, next});
        t = next;
    }
    std::vector<Panel> all;
    all.reserve(2 * right.size());
    for (auto it = right.rbegin(); it != right.rend(); ++it) all.push_back({-it->b, -it->a});
    all.insert(all.end(), right.begin(), right.end());
    return all;
}

cplx omega_integrand(const OmegaParams& p, double t) {
    const cplx s(-p.delta, t);
    const double n = p.n;
    const cplx num_arg = (1.0 - n * s) / 2.0;
    const cplx den_arg = (n * s + 1.0) / 2.0 + static_cast<double>(p.nu) - n / 2.0;
    cplx log_den;
    try {
        log_den = log_gamma(den_arg);
    } catch (const Error&) {
        return 0.0;  // 1/Gamma vanishes at its poles
    }
    cplx exponent = log_gamma(num_arg) - log_den + s * std::log(p.y) - static_cast<double>(p.k) * std::log(s + p.Lambda);
    return std::exp(exponent) / (2.0 * kPi);
}

cplx integrate_panels(const OmegaParams& p, const std::vector<Panel>& panels, long& nodes) {
    const auto& rule = gauss_legendre::rule20();
    CompensatedSum re, im;
    for (const auto& panel : panels) {
        double mid = 0.5 * (panel.a + panel.b);
        double half = 0.5 * (panel.b - panel.a);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            cplx v = rule.weights[i] * half * omega_integrand(p, mid + half * rule.nodes[i]);
            re.add(v.real());
            im.add(v.imag());
        }
        nodes += static_cast<long>(rule.nodes.size());
    }
    return {re.value(), im.value()};
}

std::vector<Panel> halve(const std::vector<Panel>& panels) {
    std::vector<Panel> out;
    out.reserve(2 * panels.size());
    for (const auto& pnl : panels) {
        double mid = 0.5 * (pnl.a + pnl.b);
        out.push_back({pnl.a, mid});
        out.push_back({mid, pnl.b});
    }
    return out;
}

}  // namespace

OmegaResult omega_quadrature(const OmegaParams& params) {
    const auto& p = params;
    if (p.n < 1 || p.nu < 0 || p.k < 0) throw Error(Errc::HypothesisViolated, "need n >= 1 and non-negative nu, k");
    if (!(p.y >= 1.0) || !(p.Y >= 1.0)) throw Error(Errc::HypothesisViolated, "need y, Y >= 1");
    if (!(p.delta > 0.0 && p.delta <= 0.1)) throw Error(Errc::HypothesisViolated, "need delta in (0, 0.1]");
    if (!(p.Lambda >= 1.0)) throw Error(Errc::HypothesisViolated, "need Lambda >= 1");
    if (!(p.y < std::pow(p.n * p.Y / 2.0, p.n))) throw Error(Errc::HypothesisViolated, "need y < (nY/2)^n");

    constexpr double kTol = 1e-8;
    OmegaResult out;
    out.params = params;
    auto panels = omega_panels(p);
    cplx coarse = integrate_panels(p, panels, out.nodes);
    for (int level = 0; level < 6; ++level) {
        panels = halve(panels);
        cplx fine = integrate_panels(p, panels, out.nodes);
        out.est_quad_error = std::abs(fine - coarse);
        out.value = fine;
        if (out.est_quad_error < kTol) return out;
        coarse = fine;
    }
    throw Error(Errc::NonConvergence, "Omega quadrature halving stalled at " + std::to_string(out.est_quad_error));
}

OmegaMainTerm omega_main_term(int nu, int k, double y, int n) {
    if (!(y >= 1.0)) throw Error(Errc::InvalidArgument, "omega_main_term needs y >= 1");
    OmegaMainTerm out;
    const double root = std::pow(y, 1.0 / n);
    const double order = nu + k - n / 2.0;
    out.bessel_form = std::pow(n / 2.0, k - 1) * std::pow(y, 0.5 + (1.0 - nu - k) / n) * bessel_j(order, 2.0 * root);
    out.gap_scale = std::pow(y, 0.5 - 0.5 / n - 1.0 / n);
    if (nu == 0 && k == 1) {
        double cosine = std::pow(y, 0.5 - 0.5 / n) * std::cos(2.0 * root + (n - 3) * kPi / 4.0) / std::sqrt(kPi);
        out.cosine_form = cosine;
        out.cosine_gap = std::abs(out.bessel_form - cosine);
    }
    return out;
}

double omega_envelope(const OmegaParams& p) {
    const double n = p.n;
    const double e = n / 2.0 - p.nu - p.k;
    double s = (p.nu == 0 && p.k == 1) ? std::pow(p.y, 0.5 - 0.5 / n - 1.0 / n) : 1.0;
    return s + std::pow(p.Y, e + n * p.delta) + std::pow(p.Y, e) / std::log(std::pow(n * p.Y / 2.0, n) / p.y);
}

double omega_envelope_constant(int nu, int k, double y, int n) {
    const double u0 = std::pow(y, 1.0 / n);
    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
        double u = u0 + kPi * i / 12.0;
        OmegaParams p;
        p.nu = nu;
        p.k = k;
        p.n = n;
        p.y = std::pow(u, n);
        p.Y = 10.0 * (2.0 / n) * u0;
        auto r = omega_quadrature(p);
        auto m = omega_main_term(nu, k, p.y, n);
        worst = std::max(worst, std::abs(r.value.real() - m.bessel_form) / omega_envelope(p));
    }
    return worst;
}

ZeroAlignment omega_zero_alignment(double u_lo, double u_hi, double step, const OmegaParams& base) {
    if (!(step > 0.0) || !(u_hi > u_lo)) throw Error(Errc::InvalidArgument, "bad zero-scan range");
    const int n = base.n;
    std::vector<double> us, vs;
    for (long i = 0;; ++i) {
        double u = u_lo + step * i;
        if (u > u_hi + 1e-12) break;
        OmegaParams p = base;
        p.nu = 0;
        p.k = 1;
        p.y = std::pow(u, n);
        us.push_back(u);
        vs.push_back(omega_quadrature(p).value.real());
    }
    std::vector<double> crossings;
    for (std::size_t i = 1; i < us.size(); ++i) {
        if ((vs[i] > 0.0) != (vs[i - 1] > 0.0)) crossings.push_back(us[i - 1] + (us[i] - us[i - 1]) * vs[i - 1] / (vs[i - 1] - vs[i]));
    }
    ZeroAlignment out;
    // zeros of cos(2u + (n-3) pi/4): u = pi/4 + j pi/2 - (n-3) pi/8
    const double first = kPi / 4.0 - (n - 3) * kPi / 8.0;
    for (long j = static_cast<long>(std::ceil((u_lo - first) / (kPi / 2))); ; ++j) {
        double cz = first + j * kPi / 2.0;
        if (cz > u_hi - step) break;
        if (cz < u_lo + step) continue;
        double best = std::numeric_limits<double>::quiet_NaN();
        for (double c : crossings)
            if (std::isnan(best) || std::abs(c - cz) < std::abs(best - cz)) best = c;
        out.cosine_zeros.push_back(cz);
        out.omega_zeros.push_back(best);
        out.worst_relative = std::isnan(best) ? HUGE_VAL : std::max(out.worst_relative, std::abs(best - cz) / cz);
    }
    return out;
}

SineSquareIntegral sine_square_integral(double B) {
    if (!(B >= 10.0)) throw Error(Errc::InvalidArgument, "sine_square_integral needs B >= 10");
    const auto& rule = gauss_legendre::rule20();
    auto f = [](double y) {
        double x = kPi * y;
        double s = (std::abs(x) < 1e-4) ? kPi * (1.0 - x * x / 6.0) : std::sin(x) / y;
        return s * s;
    };
    CompensatedSum total;
    double a = 0.0;
    while (a < B) {
        double b = std::min(B, a + 1.0);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
        total.add(panel * half);
        a = b;
    }
    SineSquareIntegral out;
    out.value = total.value();
    out.tail_gap = kPi * kPi / 2.0 - out.value;
    return out;
}

}  // namespace msslab
