#include "msslab/shortsum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "msslab/error.hpp"
#include "msslab/parallel.hpp"
#include "msslab/rankin.hpp"
#include "msslab/rng.hpp"
#include "msslab/summation.hpp"

namespace msslab {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t first_index(double x) { return static_cast<std::int64_t>(std::ceil(x)); }
std::int64_t last_index(double x) { return static_cast<std::int64_t>(std::floor(x)); }

cplx interval_sum_complex(const HeckeTable& table, double x, double window) {
    if (!(window >= 0.0)) throw Error(Errc::InvalidArgument, "window must be >= 0");
    if (x + window > static_cast<double>(table.M()) + 1.0 - 1e-9) {
        std::ostringstream msg;
        msg << "window end " << x + window << " beyond table bound " << table.M();
        throw Error(Errc::RangeExceeded, msg.str());
    }
    return table.range_sum_complex(first_index(x), last_index(x + window));
}

double nth_root(double v, int n) { return n == 3 ? std::cbrt(v) : std::pow(v, 1.0 / n); }

std::uint32_t term_count(const HeckeTable& table, double X, double theta) {
    double top = std::pow(X, theta);
    if (top < 1.0) return 0;
    if (top >= static_cast<double>(table.M()) + 1.0) throw Error(Errc::RangeExceeded, "X^theta exceeds the table");
    return static_cast<std::uint32_t>(std::floor(top * (1.0 + 1e-15)));
}

void check_range(const HeckeTable& table, double end) {
    if (end > static_cast<double>(table.M())) {
        std::ostringstream msg;
        msg << "experiment needs coefficients up to " << end << " but the table stops at " << table.M();
        throw Error(Errc::RangeExceeded, msg.str());
    }
}

void require_admissible(const Admissibility& adm, bool force) {
    if (adm.ok()) return;
    if (!adm.hard_ok() || !force) throw Error(Errc::InadmissibleParams, adm.violations());
}

}  // namespace

double interval_sum(const HeckeTable& table, double x, double window) {
    if (!(x >= 1.0)) throw Error(Errc::InvalidArgument, "x must be >= 1");
    return interval_sum_complex(table, x, window).real();
}

double main_term_P(const HeckeTable& table, double x, double X, double theta) {
    const int n = table.n();
    const std::uint32_t terms = term_count(table, X, theta);
    const double shift = (n - 3) * kPi / 4.0;
    const double decay = 0.5 + 0.5 / n;
    CompensatedSum sum;
    for (std::uint32_t m = 1; m <= terms; ++m) {
        double a = table.real(m);  // Re conj(A(m)) = Re A(m)
        if (a == 0.0) continue;
        double phase = 2.0 * kPi * n * nth_root(m * x, n) + shift;
        sum.add(a * std::cos(phase) / std::pow(static_cast<double>(m), decay));
    }
    return std::pow(x, 0.5 - 0.5 / n) / (kPi * std::sqrt(static_cast<double>(n))) * sum.value();
}

double error_term_E(const HeckeTable& table, double x, double X, double theta) {
    return table.prefix(last_index(x)) - main_term_P(table, x, X, theta);
}

MomentEstimate mean_square(const std::function<double(double)>& f, double X, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 2) throw Error(Errc::InvalidArgument, "mean_square needs at least 2 samples");
    std::vector<double> sq(samples);
    parallel_for(samples, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            KeyedRng rng(hash_combine(seed, i));
            double x = X + X * (static_cast<double>(i) + rng.uniform()) / static_cast<double>(samples);
            double v = f(x);
            sq[i] = v * v;
        }
    });
    CompensatedSum sum;
    for (double v : sq) sum.add(v);
    const double mean = sum.value() / static_cast<double>(samples);
    CompensatedSum dev;
    for (double v : sq) dev.add((v - mean) * (v - mean));
    MomentEstimate out;
    out.value = mean;
    out.samples = samples;
    out.X = X;
    out.stderr_ = std::sqrt(dev.value() / static_cast<double>(samples - 1) / static_cast<double>(samples));
    return out;
}

bool Admissibility::ok() const noexcept {
    for (const auto& c : checks)
        if (!c.holds) return false;
    return true;
}

bool Admissibility::hard_ok() const noexcept {
    for (const auto& c : checks)
        if (c.hard && !c.holds) return false;
    return true;
}

std::string Admissibility::violations() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& c : checks) {
        if (c.holds) continue;
        if (!first) out << "; ";
        out << c.name << " (" << c.lhs << " vs " << c.rhs << ")";
        first = false;
    }
    return out.str();
}

Admissibility admissible_params(double X, double L_or_Delta, double theta, int n, double vartheta, double eps,
                                Window kind) {
    Admissibility a;
    auto add = [&](std::string name, bool hard, double lhs, double rhs, bool holds) {
        a.checks.push_back({std::move(name), holds, hard, lhs, rhs});
    };
    const double denom = n - 1 + 2.0 * n * vartheta;
    add("vartheta < 1/2 - 1/n", true, vartheta, 0.5 - 1.0 / n, vartheta < 0.5 - 1.0 / n);
    add("theta > 0", true, theta, 0.0, theta > 0.0);
    add("theta < 1/(n-1+2n vartheta)", true, theta, 1.0 / denom, theta < 1.0 / denom);
    if (kind == Window::Theorem1) {
        add("L >= 2", true, L_or_Delta, 2.0, L_or_Delta >= 2.0);
        double cap = std::pow(X, 1.0 / (n * denom) - eps);
        add("L <= X^(1/(n(n-1+2n vartheta)) - eps)", false, L_or_Delta, cap, L_or_Delta <= cap);
    } else {
        add("Delta > 0", true, L_or_Delta, 0.0, L_or_Delta > 0.0);
        double lo = std::pow(X, 1.0 - 1.0 / n + eps), hi = std::pow(X, 1.0 - eps);
        add("Delta >= X^(1-1/n+eps)", false, L_or_Delta, lo, L_or_Delta >= lo);
        add("Delta <= X^(1-eps)", false, L_or_Delta, hi, L_or_Delta <= hi);
    }
    return a;
}

const char* nearest_name(Nearest n) noexcept { return n == Nearest::Paper ? "paper" : "derived"; }

double paper_prefactor(int n) { return (std::pow(2.0, 1.0 - 1.0 / n) - 1.0) / (2.0 * n - 1.0); }
double derived_prefactor(int n) { return n * (std::pow(2.0, 2.0 - 1.0 / n) - 1.0) / (2.0 * n - 1.0); }
double bf_prefactor(int n) { return (std::pow(2.0, 2.0 - 1.0 / n) - 1.0) / (2.0 * n - 1.0) / (kPi * kPi); }

ConstantReport compare_constants(double empirical_c, double candidate_paper, double candidate_derived) {
    ConstantReport r;
    r.empirical_c = empirical_c;
    r.candidate_paper = candidate_paper;
    r.candidate_derived = candidate_derived;
    r.gap_paper = std::abs(empirical_c / candidate_paper - 1.0);
    r.gap_derived = std::abs(empirical_c / candidate_derived - 1.0);
    // compare on a log scale so that over- and undershoot weigh the same
    double lp = std::abs(std::log(empirical_c / candidate_paper));
    double ld = std::abs(std::log(empirical_c / candidate_derived));
    r.nearest = ld < lp ? Nearest::Derived : Nearest::Paper;
    return r;
}

ExperimentResult theorem1_experiment(const HeckeTable& table, const ExperimentParams& p, double slope) {
    const int n = table.n();
    ExperimentResult out;
    out.admissibility = admissible_params(p.X, p.window, p.theta, n, p.vartheta, p.eps, Window::Theorem1);
    require_admissible(out.admissibility, p.force);
    const double L = p.window;
    check_range(table, 2.0 * p.X + std::pow(2.0 * p.X, 1.0 - 1.0 / n) / L);

    out.moment = mean_square(
        [&](double x) { return std::abs(interval_sum_complex(table, x, std::pow(x, 1.0 - 1.0 / n) / L)); }, p.X, p.samples,
        p.seed);
    out.moment.window = L;
    out.moment.theta = p.theta;
    const double scale = std::pow(p.X, 1.0 - 1.0 / n) / L;
    out.constants = compare_constants(out.moment.value / scale, paper_prefactor(n) * slope, derived_prefactor(n) * slope);
    return out;
}

BfConstant bf_constant(const HeckeTable& table, std::uint32_t cutoff, double slope, bool arithmetic) {
    if (cutoff < 1 || cutoff > table.M()) throw Error(Errc::RangeExceeded, "B_f cutoff outside the table");
    const int n = table.n();
    CompensatedSum series;
    for (std::uint32_t m = 1; m <= cutoff; ++m) {
        double md = m;
        series.add(table.abs2(m) / (md * nth_root(md, n)));
    }
    BfConstant out;
    out.series = series.value();
    if (slope <= 0.0) slope = empirical_rs_slope(table, cutoff).slope;
    out.tail = slope * n / nth_root(cutoff, n);
    out.prefactor = bf_prefactor(n);
    out.value = out.prefactor * (out.series + out.tail);
    out.arithmetic = arithmetic;
    return out;
}

ExperimentResult theorem2_experiment(const HeckeTable& table, const ExperimentParams& p, double slope) {
    const int n = table.n();
    ExperimentResult out;
    out.admissibility = admissible_params(p.X, p.window, p.theta, n, p.vartheta, p.eps, Window::Theorem2);
    require_admissible(out.admissibility, p.force);
    const double Delta = p.window;
    check_range(table, 2.0 * p.X + Delta);

    out.moment = mean_square([&](double x) { return std::abs(interval_sum_complex(table, x, Delta)); }, p.X, p.samples, p.seed);
    out.moment.window = Delta;
    out.moment.theta = p.theta;

    const std::uint32_t cutoff = p.series_cutoff == 0 ? table.M() : std::min(p.series_cutoff, table.M());
    const double full = bf_constant(table, cutoff, slope).value;
    const std::uint32_t short_cut = std::max<std::uint32_t>(1, term_count(table, p.X, p.theta));
    CompensatedSum truncated;
    for (std::uint32_t m = 1; m <= short_cut; ++m) {
        double md = m;
        truncated.add(table.abs2(m) / (md * nth_root(md, n)));
    }
    out.constants = compare_constants(out.moment.value / std::pow(p.X, 1.0 - 1.0 / n), full, bf_prefactor(n) * truncated.value());
    return out;
}

MomentEstimate error_increment_mean_square(const HeckeTable& table, const ExperimentParams& p) {
    const int n = table.n();
    const double L = p.window;
    check_range(table, 2.0 * p.X + std::pow(2.0 * p.X, 1.0 - 1.0 / n) / L);
    auto out = mean_square(
        [&](double x) {
            double w = std::pow(x, 1.0 - 1.0 / n) / L;
            return error_term_E(table, x + w, p.X, p.theta) - error_term_E(table, x, p.X, p.theta);
        },
        p.X, p.samples, p.seed);
    out.window = L;
    out.theta = p.theta;
    return out;
}

}  // namespace msslab
