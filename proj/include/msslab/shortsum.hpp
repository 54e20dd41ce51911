#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "msslab/satake.hpp"

namespace msslab {

// sum_{ceil(x) <= m <= floor(x + window)} A(m). RangeExceeded past the table.
double interval_sum(const HeckeTable& table, double x, double window);

// x^{1/2-1/(2n)} / (pi sqrt n) * sum_{m <= X^theta} A(1,...,1,m) m^{-1/2-1/(2n)}
//   * cos(2 pi n (m x)^{1/n} + (n-3) pi / 4),
// with A(1,...,1,m) = conj A(m,1,...,1); n is the table's rank.
double main_term_P(const HeckeTable& table, double x, double X, double theta);

// sum_{m <= x} A(m) - P(x; theta).
double error_term_E(const HeckeTable& table, double x, double X, double theta);

struct MomentEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    double X = 0.0;
    double window = 0.0;  // L or Delta
    double theta = 0.0;
};

// (1/X) int_X^{2X} |f|^2 by stratified sampling: one uniform point in each of
// `samples` equal strata, drawn from a generator keyed by (seed, stratum).
// stderr is the sample standard deviation over sqrt(samples). f is called
// concurrently and must be thread-safe.
MomentEstimate mean_square(const std::function<double(double)>& f, double X, std::uint64_t samples, std::uint64_t seed);

enum class Window { Theorem1, Theorem2 };

struct Inequality {
    std::string name;
    bool holds = false;
    bool hard = false;  // violated hard inequalities cannot be forced
    double lhs = 0.0;
    double rhs = 0.0;
};

struct Admissibility {
    std::vector<Inequality> checks;
    bool ok() const noexcept;
    bool hard_ok() const noexcept;
    std::string violations() const;  // "; "-joined names of the failing checks
};

// Hard: vartheta < 1/2 - 1/n, 0 < theta < 1/(n-1+2n vartheta), L >= 2, Delta > 0.
// Asymptotic (the implied constants are unknown): L <= X^{1/(n(n-1+2n vartheta)) - eps},
// X^{1-1/n+eps} <= Delta <= X^{1-eps}.
Admissibility admissible_params(double X, double L_or_Delta, double theta, int n, double vartheta, double eps,
                                Window kind);

enum class Nearest { Paper, Derived };
const char* nearest_name(Nearest n) noexcept;

struct ConstantReport {
    double empirical_c = 0.0;
    double candidate_paper = 0.0;
    double candidate_derived = 0.0;
    Nearest nearest = Nearest::Paper;
    double gap_paper = 0.0;  // |empirical_c / candidate - 1|
    double gap_derived = 0.0;
};

// (2^{1-1/n} - 1) / (2n - 1)
double paper_prefactor(int n);
// n (2^{2-1/n} - 1) / (2n - 1)
double derived_prefactor(int n);
// (1/pi^2) (2^{2-1/n} - 1) / (2n - 1)
double bf_prefactor(int n);

ConstantReport compare_constants(double empirical_c, double candidate_paper, double candidate_derived);

struct ExperimentParams {
    double X = 1e6;
    double window = 10.0;  // L for theorem1 windows, Delta for theorem2
    double theta = 0.3;
    double vartheta = 0.0;
    double eps = 0.01;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    bool force = false;  // run despite violated asymptotic inequalities
    std::uint32_t series_cutoff = 0;  // B_f series cutoff for theorem2, 0 means the table length
};

struct ExperimentResult {
    MomentEstimate moment;
    ConstantReport constants;
    Admissibility admissibility;
};

// Mean square of S(x, x^{1-1/n}/L) over [X, 2X]; empirical_c = value L / X^{1-1/n};
// candidates are the two prefactors times slope. InadmissibleParams names
// the violated inequalities unless forced (hard ones are never forced).
ExperimentResult theorem1_experiment(const HeckeTable& table, const ExperimentParams& params, double slope);

struct BfConstant {
    double value = 0.0;   // prefactor * (series + tail)
    double series = 0.0;  // sum_{m <= cutoff} |A(m)|^2 / m^{1+1/n}
    double tail = 0.0;    // slope * n * cutoff^{-1/n}, from partial summation
    double prefactor = 0.0;
    bool arithmetic = true;
};

// slope <= 0 means: take empirical_rs_slope at the cutoff.
BfConstant bf_constant(const HeckeTable& table, std::uint32_t cutoff, double slope = 0.0, bool arithmetic = true);

// Mean square of S(x, Delta) over [X, 2X]; empirical_c = value / X^{1-1/n}.
// candidate_paper is B_f with the full series, candidate_derived is B_f with
// the series cut at X^theta (the part carried by P(x; theta) alone).
ExperimentResult theorem2_experiment(const HeckeTable& table, const ExperimentParams& params, double slope);

// Mean square of E(x + w; theta) - E(x; theta), w = x^{1-1/n}/L, over [X, 2X].
MomentEstimate error_increment_mean_square(const HeckeTable& table, const ExperimentParams& params);

}  // namespace msslab
